"""Rank decision on the Tutte matrix from a ``(k+1) x (k+1)`` linear sketch.

The sketch keeps ``M = L T(G) R`` where ``T(G)`` is the skew-symmetric Tutte
matrix with pseudorandom indeterminates and ``L``, ``R`` are pseudorandom
field matrices. No entry of ``L``, ``R`` or ``T`` is stored; each is a hash of
the seed and its position, so a deletion subtracts exactly what the
matching insertion added. With high probability
``rank(M) = min(k+1, rank(T(G))) = min(k+1, 2 * nu(G))``.
"""

from __future__ import annotations

import numpy as np

from .. import field
from .._random import derive_seed, hash64
from ..graph import EdgeStream, edge_key
from .base import LinearSketch, register

_FLUSH_AT = 2048


def _left_columns(seed: int, dim: int, vertices: np.ndarray) -> np.ndarray:
    """Columns ``L[:, v]`` for each ``v``, shape ``(dim, len(vertices))``."""
    keys = vertices.astype(np.uint64)[None, :] * np.uint64(dim) + np.arange(dim, dtype=np.uint64)[:, None]
    return field.to_field(hash64(seed, keys))


@register(5)
class TutteRankSketch(LinearSketch):
    def __init__(self, n: int, k: int, seed: int = 0):
        if k < 1:
            raise ValueError("rank parameter k must be at least 1")
        self.n = int(n)
        self.k = int(k)
        self.seed = int(seed)
        self.dim = self.k + 1
        self._l_seed = derive_seed(self.seed, "L")
        self._r_seed = derive_seed(self.seed, "R")
        self._x_seed = derive_seed(self.seed, "x")
        self.M = np.zeros((self.dim, self.dim), dtype=np.uint64)
        self._pending: list[tuple[np.ndarray, ...]] = []
        self._pending_size = 0

    def _params(self):
        return (self.n, self.k, self.seed)

    @classmethod
    def _from_params(cls, p):
        return cls(p[0], p[1], p[2])

    def _state(self):
        return [self.M]

    def indeterminates(self, u, v) -> np.ndarray:
        return field.to_field(hash64(self._x_seed, edge_key(u, v)))

    def update(self, u: int, v: int, delta: int = 1) -> None:
        self.update_many(np.array([delta]), np.array([u]), np.array([v]))

    def update_many(self, sign, u, v) -> None:
        sign = np.asarray(sign, dtype=np.int64).reshape(-1)
        u = np.asarray(u, dtype=np.int64).reshape(-1)
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        if np.any(u == v):
            raise ValueError("self-loops have no Tutte entry")
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        self._pending.append((sign, lo, hi))
        self._pending_size += sign.size
        if self._pending_size >= _FLUSH_AT:
            self._flush()

    def _flush(self) -> None:
        if not self._pending:
            return
        sign = np.concatenate([p[0] for p in self._pending])
        u = np.concatenate([p[1] for p in self._pending])
        v = np.concatenate([p[2] for p in self._pending])
        self._pending.clear()
        self._pending_size = 0
        coef = field.mul(field.from_int(sign), self.indeterminates(u, v))
        # M += sum_e coef_e * (L[:,u] R[v,:] - L[:,v] R[u,:])
        left = np.hstack([
            field.mul(_left_columns(self._l_seed, self.dim, u), coef[None, :]),
            field.neg(field.mul(_left_columns(self._l_seed, self.dim, v), coef[None, :])),
        ])
        right = np.vstack([
            _left_columns(self._r_seed, self.dim, v).T,
            _left_columns(self._r_seed, self.dim, u).T,
        ])
        self.M = field.add(self.M, field.matmul(left, right))

    def rank(self, stop_at: int | None = None) -> int:
        self._flush()
        return field.rank(self.M, stop_at=stop_at)

    def decide(self, k: int | None = None) -> bool:
        """Whether ``rank(T(G)) >= k`` (default: the sketch's own ``k``)."""
        k = self.k if k is None else int(k)
        if k > self.dim:
            raise ValueError(f"sketch of dimension {self.dim} cannot certify rank {k}")
        if k <= 0:
            return True
        self._flush()
        size = min(k + 1, self.dim)
        return field.rank(self.M[:size, :size], stop_at=k) >= k

    def consume(self, stream: EdgeStream) -> TutteRankSketch:
        self.update_many(stream.sign, stream.u, stream.v)
        return self


def tutte_update(sk: TutteRankSketch, u: int, v: int, delta: int = 1) -> None:
    sk.update(u, v, delta)


def rank_decision(sk: TutteRankSketch) -> bool:
    return sk.decide()


def doubling_levels(k_max: int, extra: int | None = None) -> list[int]:
    """Rank parameters ``1, 2, 4, ..., <= k_max`` plus an optional extra value."""
    ks = []
    k = 1
    while k <= k_max:
        ks.append(k)
        k *= 2
    if extra is not None and extra not in ks:
        ks.append(int(extra))
    return sorted(ks)


@register(6)
class DoublingRankSketch(LinearSketch):
    """Rank decisions for ``k = 1, 2, 4, ... , k_max`` from one shared sketch.

    The sketch for a smaller ``k`` would use the leading rows of ``L`` and
    leading columns of ``R``, so its ``M`` is the leading
    ``(k+1) x (k+1)`` block of the largest one. One accumulator of size
    ``(K+1)^2`` therefore answers every decision.
    """

    def __init__(self, n: int, k_max: int, seed: int = 0, extra: int | None = None):
        self.n = int(n)
        self.k_max = int(k_max)
        self.extra = extra
        self.seed = int(seed)
        self.levels = doubling_levels(self.k_max, extra)
        self.sketch = TutteRankSketch(n, max(self.levels), seed)

    def _params(self):
        return (self.n, self.k_max, self.seed, 0 if self.extra is None else int(self.extra))

    @classmethod
    def _from_params(cls, p):
        return cls(p[0], p[1], p[2], p[3] or None)

    def _state(self):
        return self.sketch._state()

    def _flush(self):
        self.sketch._flush()

    def update_many(self, sign, u, v) -> None:
        self.sketch.update_many(sign, u, v)

    def consume(self, stream: EdgeStream) -> DoublingRankSketch:
        self.sketch.consume(stream)
        return self

    def decisions(self) -> dict[int, bool]:
        self.sketch._flush()
        out = {}
        for k in self.levels:
            out[k] = self.sketch.decide(k)
        return out

    def doubling_value(self) -> int:
        """``2^(i+1)`` for the largest power of two ``2^i`` with rank >= 2^i; 0 if none."""
        best = 0
        for k, ok in self.decisions().items():
            if ok and k & (k - 1) == 0 and k <= self.k_max:
                best = max(best, 2 * k)
        return best


def matching_size_by_doubling(stream: EdgeStream, k_max: int, seed: int = 0) -> int:
    """A value ``R`` with ``R/4 <= nu(G) <= R/2`` whenever ``2 nu(G) < k_max``."""
    if k_max < 1 or k_max & (k_max - 1):
        raise ValueError("k_max must be a power of two")
    return DoublingRankSketch(stream.n, k_max, seed).consume(stream).doubling_value()
