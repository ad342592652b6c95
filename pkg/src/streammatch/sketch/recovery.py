"""Exact s-sparse recovery from hashed 1-sparse testers.

Each cell keeps three linear counters over the coordinates hashed to it:
``count = sum(a_i)``, ``isum = sum(a_i * i)`` and ``fp = sum(a_i * z_i) mod p``
for a pseudorandom field value ``z_i``. A cell is *pure* when it holds a
single coordinate, detected by ``isum / count`` being a coordinate that
hashes to this cell and whose fingerprint matches. Decoding peels pure cells
until nothing is left, or reports failure when it gets stuck.
"""

from __future__ import annotations

import math

import numpy as np

from .. import field
from .._random import derive_seed, derive_seeds, hash64
from .base import LinearSketch, bits_float, float_bits, register


class _Fail:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "FAIL"


FAIL = _Fail()


def recovery_repetitions(s: int, delta: float) -> int:
    return max(3, math.ceil(math.log(s * s / (2 * delta)) / math.log(2 * s)))


def cell_index(bucket_seeds: np.ndarray, width: int, idx: np.ndarray) -> np.ndarray:
    """``(R, len(idx))`` bucket of each coordinate in each repetition."""
    h = hash64(bucket_seeds[:, None], np.asarray(idx, dtype=np.uint64)[None, :])
    return (h % np.uint64(width)).astype(np.int64)


def fingerprint(z_seed, idx) -> np.ndarray:
    return field.to_field(hash64(z_seed, np.asarray(idx, dtype=np.uint64)))


def peel(count, isum, fp, bucket_seeds, z_seed, dim: int, limit: int):
    """Decode an ``(R, W)`` tester table.

    Returns ``{coordinate: value}`` or ``FAIL``. ``limit`` bounds the number
    of coordinates recovered before giving up.
    """
    count = count.copy()
    isum = isum.copy()
    fp = fp.copy()
    reps, width = count.shape
    found: dict[int, int] = {}
    while True:
        r, c = np.nonzero(count)
        if r.size == 0:
            break
        a = count[r, c]
        b = isum[r, c]
        ok = (b % a) == 0
        idx = np.where(ok, b // np.where(a == 0, 1, a), -1)
        ok &= (idx >= 0) & (idx < dim)
        if not ok.any():
            break
        r, c, a, idx = r[ok], c[ok], a[ok], idx[ok]
        home = cell_index(bucket_seeds, width, idx)[r, np.arange(idx.size)]
        ok = home == c
        z = fingerprint(z_seed, idx)
        ok &= field.mul(field.from_int(a), z) == fp[r, c]
        if not ok.any():
            break
        idx, a = idx[ok], a[ok]
        idx, first = np.unique(idx, return_index=True)
        a = a[first]
        if len(found) + idx.size > limit:
            return FAIL
        flat = (cell_index(bucket_seeds, width, idx) + (np.arange(reps) * width)[:, None]).reshape(-1)
        contrib = field.mul(field.from_int(a), fingerprint(z_seed, idx))
        np.subtract.at(count.reshape(-1), flat, np.tile(a, reps))
        np.subtract.at(isum.reshape(-1), flat, np.tile(a * idx, reps))
        field.scatter_add(fp.reshape(-1), flat, np.tile(field.neg(contrib), reps))
        found.update(zip(idx.tolist(), a.tolist()))
    if count.any() or isum.any() or fp.any():
        return FAIL
    return found


@register(3)
class SparseRecovery(LinearSketch):
    """Turnstile sketch that recovers any vector whose final support is at most ``s``.

    Intermediate states may have arbitrary support; only the final vector
    matters. If the final support exceeds ``s``, :meth:`recover` returns
    ``FAIL`` (wrongly decoding is prevented by the fingerprints).
    """

    def __init__(self, dim: int, s: int, delta: float = 0.01, seed: int = 0):
        if s < 1:
            raise ValueError("sparsity budget s must be at least 1")
        self.dim = int(dim)
        self.s = int(s)
        self.delta = float(delta)
        self.seed = int(seed)
        self.reps = recovery_repetitions(self.s, self.delta)
        self.width = 2 * self.s
        self._bucket_seeds = derive_seeds(self.seed, self.reps, "bucket")
        self._z_seed = derive_seed(self.seed, "fingerprint")
        self.count = np.zeros((self.reps, self.width), dtype=np.int64)
        self.isum = np.zeros((self.reps, self.width), dtype=np.int64)
        self.fp = np.zeros((self.reps, self.width), dtype=np.uint64)

    def _params(self):
        return (self.dim, self.s, float_bits(self.delta), self.seed)

    @classmethod
    def _from_params(cls, p):
        return cls(p[0], p[1], bits_float(p[2]), p[3])

    def _state(self):
        return [self.count, self.isum, self.fp]

    def update(self, i: int, delta: int = 1) -> None:
        self.update_many(np.array([i]), np.array([delta]))

    def update_many(self, idx, deltas) -> None:
        idx = np.asarray(idx, dtype=np.int64).reshape(-1)
        deltas = np.asarray(deltas, dtype=np.int64).reshape(-1)
        if idx.size == 0:
            return
        if idx.min() < 0 or idx.max() >= self.dim:
            raise IndexError(f"coordinate outside [0, {self.dim})")
        cells = cell_index(self._bucket_seeds, self.width, idx)
        contrib = field.mul(field.from_int(deltas), fingerprint(self._z_seed, idx))
        for rep in range(self.reps):
            np.add.at(self.count[rep], cells[rep], deltas)
            np.add.at(self.isum[rep], cells[rep], deltas * idx)
            field.scatter_add(self.fp[rep], cells[rep], contrib)

    def recover(self):
        """``{coordinate: value}`` of the current vector, or ``FAIL``."""
        return peel(self.count, self.isum, self.fp, self._bucket_seeds, self._z_seed, self.dim, self.s)


def sparse_recover(sk: SparseRecovery):
    return sk.recover()
