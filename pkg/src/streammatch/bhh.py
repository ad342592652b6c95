"""Boolean Hidden Hypermatching instances and their matching-gap graphs.

Vertex ``i`` of the graph is the top node of bit ``i`` and ``n + i`` is its
bottom node. Each bit set to one contributes the edge ``(i, n + i)``; each
hyperedge contributes a clique on its bottom nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._random import rng_from_seed
from .exceptions import NonIntegral
from .graph import GraphSnapshot, WeightedEdge


@dataclass(frozen=True)
class BhhInstance:
    t: int
    x: tuple
    hypermatching: tuple
    parity: int

    def __post_init__(self):
        x = tuple(int(b) for b in self.x)
        hm = tuple(tuple(int(i) for i in e) for e in self.hypermatching)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "hypermatching", hm)
        n, t = len(x), self.t
        if t < 2:
            raise ValueError("hyperedge size t must be at least 2")
        if n % (2 * t):
            raise ValueError(f"n={n} is not divisible by 2t={2 * t}")
        if any(b not in (0, 1) for b in x) or sum(x) != n // 2:
            raise ValueError("x must be a 0/1 vector with exactly n/2 ones")
        if len(hm) != n // t or any(len(e) != t for e in hm):
            raise ValueError("hypermatching must have n/t hyperedges of size t")
        if sorted(i for e in hm for i in e) != list(range(n)):
            raise ValueError("hyperedges must partition [0, n)")
        if self.parity not in (0, 1) or any(hyperedge_parity(x, e) != self.parity for e in hm):
            raise ValueError("every hyperedge must have bit parity equal to `parity`")

    @property
    def n(self) -> int:
        return len(self.x)


def hyperedge_parity(x: Sequence[int], edge: Sequence[int]) -> int:
    return sum(x[i] for i in edge) & 1


def bhh_expected_matching(n: int, t: int, parity: int) -> int:
    """Maximum matching size of the graph built from any valid instance."""
    if t < 2 or parity not in (0, 1):
        raise ValueError("need t >= 2 and parity in {0, 1}")
    if n % (2 * t):
        raise NonIntegral(f"n={n} is not divisible by 2t={2 * t}")
    full = Fraction(3 * n, 4)
    gap = full - Fraction(n, 2 * t)
    low_parity = 0 if t % 2 else 1
    value = gap if parity == low_parity else full
    if value.denominator != 1:
        raise NonIntegral(f"matching size {value} is not an integer for n={n}, t={t}")
    return int(value)


def bhh_instance(inst: BhhInstance) -> GraphSnapshot:
    return bhh_graph(inst.x, inst.hypermatching)


def bhh_graph(x: Sequence[int], hypermatching: Sequence[Sequence[int]]) -> GraphSnapshot:
    """The graph construction without the promise check (any 0/1 vector)."""
    n = len(x)
    edges = [WeightedEdge(i, n + i) for i in range(n) if x[i]]
    for e in hypermatching:
        e = sorted(e)
        edges.extend(WeightedEdge(n + a, n + b) for k, a in enumerate(e) for b in e[k + 1:])
    return GraphSnapshot(2 * n, frozenset(edges))


def random_bhh_instance(n: int, t: int, parity: int, seed: int) -> BhhInstance:
    """Uniformly shuffled instance whose hyperedges all have the given parity."""
    if n % (2 * t) or n % 4:
        raise NonIntegral(f"no valid instance for n={n}, t={t}")
    rng = rng_from_seed(seed)
    k = n // t
    cap = t if t % 2 == parity else t - 1
    counts = np.full(k, parity)
    need = n // 2 - parity * k
    if need < 0 or need % 2 or need > (cap - parity) * k:
        raise NonIntegral(f"no valid instance for n={n}, t={t}, parity={parity}")
    while need:
        open_ = np.flatnonzero(counts + 2 <= cap)
        counts[rng.choice(open_)] += 2
        need -= 2
    perm = rng.permutation(n)
    x = [0] * n
    edges = []
    for j in range(k):
        block = perm[j * t:(j + 1) * t]
        for i in block[: counts[j]]:
            x[int(i)] = 1
        edges.append(tuple(sorted(int(i) for i in block)))
    return BhhInstance(t, tuple(x), tuple(edges), parity)


def _negation_patterns(t: int, w: int) -> list[set[int]]:
    """Positions negated in each of the four lifted copies of one hyperedge."""
    everything = set(range(t))
    tail = set(range(2, t))
    if t % 2:
        if w == 0:
            return [everything - {0}, {0} | tail, {0, 1}, set()]
        return [{0}, {1}, tail, everything]
    if w == 0:
        return [set(), everything, {0, 1}, tail]
    return [{0}, everything - {0}, {1}, {0} | tail]


def bhh_lift(x: Sequence[int], hypermatching: Sequence[Sequence[int]], w: Sequence[int]) -> BhhInstance:
    """Lift a BHH input ``(x, M, w)`` to a promise instance on ``4n`` coordinates.

    The lifted vector is ``x, x, not x, not x``. Each hyperedge is replaced by
    four hyperedges whose parities all equal ``(Mx)_l xor w_l``. For every
    position, the two plain uses map to copies 0 and 1 and the two negated
    uses to copies 2 and 3, so the lifted hyperedges partition ``[0, 4n)``.
    """
    x = [int(b) for b in x]
    n = len(x)
    if not hypermatching:
        raise ValueError("empty hypermatching")
    t = len(hypermatching[0])
    if len(w) != len(hypermatching):
        raise ValueError("w must have one bit per hyperedge")
    lifted_x = x + x + [1 - b for b in x] + [1 - b for b in x]
    lifted_edges = []
    parities = set()
    for edge, wl in zip(hypermatching, w):
        edge = list(edge)
        parities.add(hyperedge_parity(x, edge) ^ int(wl))
        used_plain = [0] * t
        used_neg = [0] * t
        for negated in _negation_patterns(t, int(wl)):
            new = []
            for pos, i in enumerate(edge):
                if pos in negated:
                    copy = 2 + used_neg[pos]
                    used_neg[pos] += 1
                else:
                    copy = used_plain[pos]
                    used_plain[pos] += 1
                new.append(copy * n + i)
            lifted_edges.append(tuple(sorted(new)))
    if len(parities) != 1:
        raise ValueError("Mx xor w is not uniform, so the input violates the promise")
    return BhhInstance(t, tuple(lifted_x), tuple(lifted_edges), parities.pop())
