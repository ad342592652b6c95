"""Offline greedy decomposition by rank, used as ground truth."""

from __future__ import annotations

from dataclasses import dataclass

from .._random import rng_from_seed
from ..graph import GraphSnapshot, WeightedEdge
from .ranks import RankPartition, representative


@dataclass(frozen=True)
class GroundTruthDecomposition:
    """Per-rank matchings ``M_i`` of the greedy decomposition.

    ``sizes[i] = |M_i|`` and ``S[i] = sum_{j >= i} |M_j|`` for ``i = 0..t``.
    """

    t: int
    matchings: tuple
    sizes: tuple
    S: tuple

    @property
    def matching(self) -> list[WeightedEdge]:
        return [e for m in self.matchings for e in m]

    @property
    def rounded_weight(self) -> int:
        """``sum_i r_i |M_i|``."""
        return sum(representative(i) * s for i, s in enumerate(self.sizes))

    def block_sum(self, lo: int, hi: int) -> int:
        """``sum_{i=lo}^{hi-1} |M_i|`` (zero for an empty range)."""
        lo, hi = max(lo, 0), min(hi, self.t + 1)
        return sum(self.sizes[lo:hi])

    def D(self, I_sign) -> list[int]:
        """Block sums between consecutive significant ranks (``D[0]`` is ``|M_t|``)."""
        I_sign = list(I_sign)
        out = []
        for ell, i in enumerate(I_sign):
            out.append(self.sizes[i] if ell == 0 else self.block_sum(i, I_sign[ell - 1]))
        return out


def uehara_chen_reference(g: GraphSnapshot, partition: RankPartition | None = None,
                          seed: int | None = None) -> GroundTruthDecomposition:
    """Greedy maximal matchings from the top rank down on the residual graph.

    Each rank's edges are scanned in canonical ``(u, v)`` order, or in a
    permutation of that order drawn from ``seed`` when one is given. An edge
    is taken when both endpoints are still free.
    """
    partition = partition or RankPartition.from_snapshot(g)
    t = partition.t
    rng = rng_from_seed(seed) if seed is not None else None
    used: set[int] = set()
    matchings: list[tuple] = [()] * (t + 1)
    for i in range(t, -1, -1):
        edges = sorted(partition.edges(i))
        if rng is not None and edges:
            edges = [edges[k] for k in rng.permutation(len(edges))]
        taken = []
        for e in edges:
            if e.u not in used and e.v not in used:
                used.update((e.u, e.v))
                taken.append(e)
        matchings[i] = tuple(taken)
    sizes = tuple(len(m) for m in matchings)
    S, acc = [0] * (t + 1), 0
    for i in range(t, -1, -1):
        acc += sizes[i]
        S[i] = acc
    return GroundTruthDecomposition(t, tuple(matchings), sizes, tuple(S))
