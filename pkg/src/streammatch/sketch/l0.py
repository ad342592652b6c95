"""Turnstile ℓ₀ estimation and ℓ₀ sampling.

Both sketches subsample coordinates into geometric levels using the number
of leading zero bits of a hash, so level ``ℓ`` receives a ``2^-(ℓ+1)``
fraction of the coordinates. Levels are stored disjointly and summed on
demand when a nested view ("level ``ℓ`` or deeper") is needed.
"""

from __future__ import annotations

import math

import numpy as np

from .. import field
from .._random import derive_seed, derive_seeds, hash64, leading_zeros
from .base import LinearSketch, bits_float, float_bits, register
from .recovery import FAIL, fingerprint, peel, recovery_repetitions


class _Empty:
    def __bool__(self):
        return False

    def __repr__(self):
        return "EMPTY"


EMPTY = _Empty()


def level_count(dim: int) -> int:
    return max(1, math.ceil(math.log2(max(dim, 2)))) + 1


@register(1)
class L0Estimator(LinearSketch):
    """(1 ± ε) estimate of the number of nonzero coordinates.

    Every repetition hashes coordinates to a level and to one of
    ``B = ceil(8/ε²)`` buckets, each bucket holding a field fingerprint
    ``sum(x_i z_i) mod p``. A bucket is occupied iff its fingerprint is
    nonzero (wrong only with probability 1/p). At query time each
    repetition picks the shallowest nested level with load at most 0.8B and
    inverts the balls-in-bins occupancy; the answer is the median over
    ``2*ceil(ln(1/δ)/2) + 1`` repetitions.
    """

    MAX_LOAD = 0.8

    def __init__(self, dim: int, eps: float = 0.1, delta: float = 0.05, seed: int = 0):
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if not 0 < delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        self.dim = int(dim)
        self.eps = float(eps)
        self.delta = float(delta)
        self.seed = int(seed)
        self.buckets = math.ceil(8 / eps**2)
        self.reps = 2 * math.ceil(0.5 * math.log(1 / delta)) + 1
        self.levels = level_count(self.dim)
        self._level_seeds = derive_seeds(self.seed, self.reps, "level")
        self._bucket_seeds = derive_seeds(self.seed, self.reps, "bucket")
        self._z_seed = derive_seed(self.seed, "fingerprint")
        self.table = np.zeros((self.reps, self.levels, self.buckets), dtype=np.uint64)

    def _params(self):
        return (self.dim, float_bits(self.eps), float_bits(self.delta), self.seed)

    @classmethod
    def _from_params(cls, p):
        return cls(p[0], bits_float(p[1]), bits_float(p[2]), p[3])

    def _state(self):
        return [self.table]

    def update(self, i: int, delta: int = 1) -> None:
        self.update_many(np.array([i]), np.array([delta]))

    def update_many(self, idx, deltas) -> None:
        idx = np.asarray(idx, dtype=np.int64).reshape(-1)
        deltas = np.asarray(deltas, dtype=np.int64).reshape(-1)
        if idx.size == 0:
            return
        if idx.min() < 0 or idx.max() >= self.dim:
            raise IndexError(f"coordinate outside [0, {self.dim})")
        keys = idx.astype(np.uint64)[None, :]
        lvl = np.minimum(leading_zeros(hash64(self._level_seeds[:, None], keys)), self.levels - 1)
        bkt = (hash64(self._bucket_seeds[:, None], keys) % np.uint64(self.buckets)).astype(np.int64)
        rep = np.arange(self.reps)[:, None]
        flat = (rep * self.levels + lvl) * self.buckets + bkt
        contrib = field.mul(field.from_int(deltas), fingerprint(self._z_seed, idx))
        field.scatter_add(self.table.reshape(-1), flat, np.broadcast_to(contrib, flat.shape))

    def _rep_estimates(self) -> np.ndarray:
        nested = self.table.copy()
        # suffix sums over levels give "level >= l" fingerprints
        for lv in range(self.levels - 2, -1, -1):
            nested[:, lv] = field.add(nested[:, lv], nested[:, lv + 1])
        occupied = np.count_nonzero(nested, axis=2)
        B = self.buckets
        out = np.zeros(self.reps)
        log_miss = math.log1p(-1 / B)
        for r in range(self.reps):
            ok = np.flatnonzero(occupied[r] <= self.MAX_LOAD * B)
            lv = int(ok[0]) if ok.size else self.levels - 1
            z = min(int(occupied[r, lv]), B - 1)
            out[r] = (2.0**lv) * math.log1p(-z / B) / log_miss
        return out

    def estimate(self) -> float:
        return float(np.median(self._rep_estimates()))


@register(2)
class L0SamplerBank(LinearSketch):
    """``count`` independent ℓ₀ samplers sharing one set of counter arrays.

    Sampler ``j`` assigns coordinate ``i`` to level ``lz(u_j(i))``. Each level
    is a small sparse-recovery table. A query decodes the deepest nonempty
    level, which contains the coordinate minimizing ``u_j`` over the whole
    support, and returns that coordinate. When ``u_j`` behaves like a random
    function, the minimizer is uniform over the support.
    """

    def __init__(self, count: int, dim: int, delta: float = 0.01, seed: int = 0):
        self.count = int(count)
        self.dim = int(dim)
        self.delta = float(delta)
        self.seed = int(seed)
        self.s = max(2, math.ceil(math.log2(1 / self.delta)) + 1)
        self.reps = recovery_repetitions(self.s, self.delta)
        self.width = 2 * self.s
        self.levels = level_count(self.dim)
        self._u_seeds = derive_seeds(self.seed, self.count, "u")
        self._bucket_seeds = np.array(
            [derive_seeds(self.seed, self.reps, "bucket", j) for j in range(self.count)], dtype=np.uint64
        ).reshape(self.count, self.reps)
        self._z_seeds = derive_seeds(self.seed, self.count, "z")
        shape = (self.count, self.levels, self.reps, self.width)
        self.cnt = np.zeros(shape, dtype=np.int64)
        self.isum = np.zeros(shape, dtype=np.int64)
        self.fp = np.zeros(shape, dtype=np.uint64)

    def _params(self):
        return (self.count, self.dim, float_bits(self.delta), self.seed)

    @classmethod
    def _from_params(cls, p):
        return cls(p[0], p[1], bits_float(p[2]), p[3])

    def _state(self):
        return [self.cnt, self.isum, self.fp]

    def update(self, i: int, delta: int = 1) -> None:
        self.update_many(np.array([i]), np.array([delta]))

    def update_many(self, idx, deltas, samplers=None) -> None:
        """Apply updates to every sampler (or the subset ``samplers``)."""
        idx = np.asarray(idx, dtype=np.int64).reshape(-1)
        deltas = np.asarray(deltas, dtype=np.int64).reshape(-1)
        if idx.size == 0:
            return
        if idx.min() < 0 or idx.max() >= self.dim:
            raise IndexError(f"coordinate outside [0, {self.dim})")
        js = np.arange(self.count) if samplers is None else np.asarray(samplers, dtype=np.int64)
        # bound the temporary (samplers x updates x reps) arrays
        step = max(1, (1 << 21) // max(1, js.size * self.reps))
        for start in range(0, idx.size, step):
            self._apply(js, idx[start:start + step], deltas[start:start + step])

    def _apply(self, js, idx, deltas):
        keys = idx.astype(np.uint64)[None, :]
        lvl = np.minimum(leading_zeros(hash64(self._u_seeds[js, None], keys)), self.levels - 1)
        z = field.to_field(hash64(self._z_seeds[js, None], keys))
        contrib = field.mul(field.from_int(deltas)[None, :], z)
        cells = (hash64(self._bucket_seeds[js][:, :, None], keys[:, None, :]) % np.uint64(self.width)).astype(np.int64)
        base = (js[:, None] * self.levels + lvl) * self.reps
        flat = ((base[:, None, :] + np.arange(self.reps)[None, :, None]) * self.width + cells).reshape(-1)
        d = np.broadcast_to(deltas[None, None, :], cells.shape).reshape(-1)
        np.add.at(self.cnt.reshape(-1), flat, d)
        np.add.at(self.isum.reshape(-1), flat, d * np.broadcast_to(idx[None, None, :], cells.shape).reshape(-1))
        field.scatter_add(self.fp.reshape(-1), flat, np.broadcast_to(contrib[:, None, :], cells.shape))

    def sample(self, j: int):
        """``(coordinate, value)`` from sampler ``j``, ``EMPTY`` or ``FAIL``."""
        nonempty = (
            self.cnt[j].any(axis=(1, 2)) | self.isum[j].any(axis=(1, 2)) | self.fp[j].any(axis=(1, 2))
        )
        levels = np.flatnonzero(nonempty)
        if levels.size == 0:
            return EMPTY
        lv = int(levels[-1])
        got = peel(
            self.cnt[j, lv], self.isum[j, lv], self.fp[j, lv],
            self._bucket_seeds[j], int(self._z_seeds[j]), self.dim, self.s,
        )
        if got is FAIL or not got:
            return FAIL
        coords = np.array(sorted(got), dtype=np.int64)
        u = hash64(int(self._u_seeds[j]), coords.astype(np.uint64))
        best = int(coords[int(np.argmin(u))])
        return best, got[best]

    def samples(self) -> list:
        """Every sampler's answer; same result as calling :meth:`sample` for each ``j``.

        One peeling round runs for all samplers at once. Samplers whose
        deepest level is not fully explained by that round are decoded one
        by one.
        """
        out: list = [EMPTY] * self.count
        nonempty = self.cnt.any(axis=(2, 3)) | self.isum.any(axis=(2, 3)) | self.fp.any(axis=(2, 3))
        J = np.flatnonzero(nonempty.any(axis=1))
        if J.size == 0:
            return out
        lv = self.levels - 1 - np.argmax(nonempty[J, ::-1], axis=1)
        cnt, isum, fp = self.cnt[J, lv].copy(), self.isum[J, lv].copy(), self.fp[J, lv].copy()
        k, R, Wd = cnt.shape
        jj, rr, cc = np.nonzero(cnt)
        a, b = cnt[jj, rr, cc], isum[jj, rr, cc]
        ok = (b % a) == 0
        idx = np.where(ok, b // a, -1)
        ok &= (idx >= 0) & (idx < self.dim)
        key = idx.astype(np.uint64)
        home = hash64(self._bucket_seeds[J[jj], rr], key) % np.uint64(Wd)
        ok &= home == cc.astype(np.uint64)
        zf = field.to_field(hash64(self._z_seeds[J[jj]], key))
        ok &= field.mul(field.from_int(a), zf) == fp[jj, rr, cc]
        pairs = np.unique(np.column_stack([jj[ok], idx[ok], a[ok]]), axis=0)
        # one value per (sampler, coordinate); np.unique sorted rows by sampler then coordinate
        if pairs.size:
            keep = np.ones(len(pairs), bool)
            keep[1:] = (pairs[1:, 0] != pairs[:-1, 0]) | (pairs[1:, 1] != pairs[:-1, 1])
            pairs = pairs[keep]
        pj, pi, pa = pairs[:, 0], pairs[:, 1], pairs[:, 2]
        found = np.bincount(pj, minlength=k)
        over = found > self.s
        pk = pi.astype(np.uint64)
        cells = hash64(self._bucket_seeds[J[pj]].T, pk[None, :]) % np.uint64(Wd)
        flat = ((pj[None, :] * R + np.arange(R)[:, None]) * Wd + cells.astype(np.int64)).reshape(-1)
        np.subtract.at(cnt.reshape(-1), flat, np.tile(pa, R))
        np.subtract.at(isum.reshape(-1), flat, np.tile(pa * pi, R))
        contrib = field.mul(field.from_int(pa), field.to_field(hash64(self._z_seeds[J[pj]], pk)))
        field.scatter_add(fp.reshape(-1), flat, np.tile(field.neg(contrib), R))
        clean = ~(cnt.any(axis=(1, 2)) | isum.any(axis=(1, 2)) | fp.any(axis=(1, 2)))
        u = hash64(self._u_seeds[J[pj]], pk)
        order = np.lexsort((u, pj))
        first = order[np.r_[True, pj[order][1:] != pj[order][:-1]]] if order.size else order
        best = {int(pj[f]): (int(pi[f]), int(pa[f])) for f in first}
        for t, j in enumerate(J.tolist()):
            if over[t]:
                out[j] = FAIL
            elif clean[t] and found[t]:
                out[j] = best[t]
            else:
                out[j] = self.sample(j)
        return out


@register(4)
class L0Sampler(L0SamplerBank):
    """A single ℓ₀ sampler."""

    def __init__(self, dim: int, delta: float = 0.01, seed: int = 0):
        super().__init__(1, dim, delta, seed)

    def _params(self):
        return (self.dim, float_bits(self.delta), self.seed)

    @classmethod
    def _from_params(cls, p):
        return cls(p[0], bits_float(p[1]), p[2])

    def sample(self, j: int = 0):
        return super().sample(j)



def l0_update(sk, i: int, delta: int = 1) -> None:
    sk.update(i, delta)


def l0_estimate(sk: L0Estimator) -> int:
    return int(round(sk.estimate()))


def l0_sample(sk: L0Sampler):
    return sk.sample()
