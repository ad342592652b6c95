"""Weight ranks: edge ``e`` has rank ``i`` when ``w(e)`` lies in ``[2^i, 2^(i+1))``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from ..exceptions import WeightOutOfRange
from ..graph import GraphSnapshot, WeightedEdge


def rank_of(w, W: int | None = None) -> int:
    """``floor(log2 w)`` for an integer weight ``1 <= w <= W``."""
    if isinstance(w, float):
        if not w.is_integer():
            raise WeightOutOfRange(f"weight {w} is not an integer")
        w = int(w)
    if w < 1 or (W is not None and w > W):
        raise WeightOutOfRange(f"weight {w} outside [1, {W if W is not None else 'inf'}]")
    return int(w).bit_length() - 1


def representative(rank: int) -> int:
    if rank < 0:
        raise WeightOutOfRange(f"rank {rank} is negative")
    return 1 << int(rank)


def ranks_of(w: np.ndarray, W: int | None = None) -> np.ndarray:
    """Vectorized :func:`rank_of` over an int64 array."""
    w = np.asarray(w, dtype=np.int64)
    if w.size and (w.min() < 1 or (W is not None and w.max() > W)):
        bad = w[(w < 1) | ((w > W) if W is not None else False)][0]
        raise WeightOutOfRange(f"weight {int(bad)} outside [1, {W if W is not None else 'inf'}]")
    r = np.zeros(w.shape, dtype=np.int64)
    x = w.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        big = x >= (1 << shift)
        r[big] += shift
        x[big] >>= shift
    return r


@dataclass(frozen=True)
class RankPartition:
    """Edges of a snapshot grouped by rank; ``t`` is the largest nonempty rank (-1 if none)."""

    t: int
    classes: Mapping[int, frozenset] = field(default_factory=dict)

    @classmethod
    def from_snapshot(cls, g: GraphSnapshot, W: int | None = None) -> RankPartition:
        groups: dict[int, set] = {}
        for e in g.edges:
            groups.setdefault(rank_of(e.w, W), set()).add(e)
        t = max(groups, default=-1)
        return cls(t, {i: frozenset(groups.get(i, ())) for i in range(t + 1)})

    def r(self, i: int) -> int:
        return representative(i)

    def edges(self, i: int) -> frozenset:
        return self.classes.get(i, frozenset())

    def rounded_weight(self, e: WeightedEdge) -> int:
        return representative(rank_of(e.w))

    def as_lists(self) -> list[list[WeightedEdge]]:
        return [sorted(self.edges(i)) for i in range(self.t + 1)]


def verify_partition(classes: Sequence[Iterable[WeightedEdge]],
                     w_prime: Mapping | Callable, eps: float) -> bool:
    """Check rounded weights and class ordering of a candidate partition.

    ``classes[i]`` is the edge set of class ``i``. The partition is valid when
    every rounded weight satisfies ``1/(1+eps) <= w'(e)/w(e) <= 1``, weights
    inside a class differ by a factor of at most ``1+eps``, and every edge of
    a lower class is strictly lighter than every edge of a higher class.
    """
    get = w_prime if callable(w_prime) else w_prime.__getitem__
    bound = Fraction(1) + Fraction(eps)
    prev_max = None
    for cls in classes:
        cls = list(cls)
        for e in cls:
            ratio = Fraction(get(e)) / e.w
            if not (1 / bound <= ratio <= 1):
                return False
        if not cls:
            continue
        lo = min(e.w for e in cls)
        hi = max(e.w for e in cls)
        if Fraction(hi, lo) > bound:
            return False
        if prev_max is not None and not prev_max < lo:
            return False
        prev_max = hi if prev_max is None else max(prev_max, hi)
    return True
