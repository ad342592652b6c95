"""Graph and dynamic-stream data model.

Vertices are integers in ``[0, n)``. An edge is identified by its canonical
endpoint pair ``u < v`` together with its weight, so a deletion must carry
the weight of the insertion it cancels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .exceptions import ConsistencyError, SelfLoopError, StreamError

INSERT = 1
DELETE = -1


@dataclass(frozen=True, slots=True, order=True)
class WeightedEdge:
    u: int
    v: int
    w: int = 1

    def __post_init__(self):
        u, v = int(self.u), int(self.v)
        if u == v:
            raise SelfLoopError(f"self-loop on vertex {u}")
        if u > v:
            u, v = v, u
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", int(self.w))
        if self.w < 1:
            raise StreamError(f"edge weights must be positive, got {self.w}")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True, slots=True)
class EdgeUpdate:
    sign: int
    edge: WeightedEdge

    def __post_init__(self):
        if self.sign not in (INSERT, DELETE):
            raise StreamError(f"update sign must be +1 or -1, got {self.sign}")


def edge_key(u, v) -> np.ndarray:
    """Canonical 64-bit edge identifier ``min << 32 | max``."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    return ((lo.astype(np.uint64) << np.uint64(32)) | hi.astype(np.uint64))


def pair_index(u, v, n: int) -> np.ndarray:
    """Dense index of the unordered pair in ``[0, n*n)``."""
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    return np.minimum(u, v) * n + np.maximum(u, v)


class EdgeStream:
    """An ordered sequence of signed weighted edge updates on ``n`` vertices.

    Stored column-wise (``sign``, ``u``, ``v``, ``w`` as int64 arrays) so
    sketches can consume it in vectorized chunks. Iterating yields
    :class:`EdgeUpdate` objects.
    """

    def __init__(self, n, sign, u, v, w=None, *, weighted=None, W=None, metadata=None, validate=True):
        self.n = int(n)
        if self.n < 0:
            raise StreamError("vertex count must be nonnegative")
        sign = np.asarray(sign, dtype=np.int64).reshape(-1)
        u = np.asarray(u, dtype=np.int64).reshape(-1)
        v = np.asarray(v, dtype=np.int64).reshape(-1)
        w = np.ones_like(u) if w is None else np.asarray(w, dtype=np.int64).reshape(-1)
        if not (len(sign) == len(u) == len(v) == len(w)):
            raise StreamError("update columns have different lengths")
        self.sign = sign
        self.u = np.minimum(u, v)
        self.v = np.maximum(u, v)
        self.w = w
        self.weighted = bool(np.any(w != 1)) if weighted is None else bool(weighted)
        self.W = None if W is None else int(W)
        self.metadata = dict(metadata or {})
        if validate:
            self._check_basic()
            self.check_consistency()

    @classmethod
    def from_updates(cls, n, updates: Iterable[EdgeUpdate], **kwargs) -> EdgeStream:
        rows = [(up.sign, up.edge.u, up.edge.v, up.edge.w) for up in updates]
        if not rows:
            return cls(n, [], [], [], [], **kwargs)
        s, a, b, c = zip(*rows)
        return cls(n, s, a, b, c, **kwargs)

    @classmethod
    def from_edges(cls, n, edges, **kwargs) -> EdgeStream:
        """Insertion-only stream of ``(u, v)`` or ``(u, v, w)`` tuples."""
        edges = [tuple(e) for e in edges]
        if not edges:
            return cls(n, [], [], [], [], **kwargs)
        u = [e[0] for e in edges]
        v = [e[1] for e in edges]
        w = [e[2] if len(e) > 2 else 1 for e in edges]
        return cls(n, np.ones(len(edges), dtype=np.int64), u, v, w, **kwargs)

    def _check_basic(self):
        if len(self) == 0:
            return
        if np.any((self.sign != INSERT) & (self.sign != DELETE)):
            raise StreamError("update signs must be +1 or -1")
        loops = np.flatnonzero(self.u == self.v)
        if loops.size:
            raise SelfLoopError(f"self-loop at update {int(loops[0])}")
        if self.u.min() < 0 or self.v.max() >= self.n:
            raise StreamError(f"vertex id outside [0, {self.n})")
        if self.w.min() < 1:
            raise StreamError("edge weights must be positive")
        if self.W is not None and self.w.max() > self.W:
            raise StreamError(f"edge weight exceeds declared W={self.W}")

    def check_consistency(self) -> None:
        """Replay the stream, enforcing multiplicity in {0, 1} at every prefix."""
        present: dict[tuple[int, int], int] = {}
        for pos, (s, a, b, c) in enumerate(
            zip(self.sign.tolist(), self.u.tolist(), self.v.tolist(), self.w.tolist())
        ):
            key = (a, b)
            if s == INSERT:
                if key in present:
                    raise ConsistencyError(
                        f"update {pos}: edge {key} inserted twice", position=pos, edge=WeightedEdge(a, b, c)
                    )
                present[key] = c
            else:
                old = present.get(key)
                if old is None:
                    raise ConsistencyError(
                        f"update {pos}: deleting absent edge {key}", position=pos, edge=WeightedEdge(a, b, c)
                    )
                if old != c:
                    raise ConsistencyError(
                        f"update {pos}: deletion weight {c} does not match inserted weight {old}",
                        position=pos,
                        edge=WeightedEdge(a, b, c),
                    )
                del present[key]

    def __len__(self) -> int:
        return len(self.sign)

    def __iter__(self) -> Iterator[EdgeUpdate]:
        for s, a, b, c in zip(self.sign.tolist(), self.u.tolist(), self.v.tolist(), self.w.tolist()):
            yield EdgeUpdate(s, WeightedEdge(a, b, c))

    def __getitem__(self, item) -> EdgeStream:
        if not isinstance(item, slice):
            raise TypeError("EdgeStream supports slicing only")
        return EdgeStream(
            self.n, self.sign[item], self.u[item], self.v[item], self.w[item],
            weighted=self.weighted, W=self.W, metadata=self.metadata, validate=False,
        )

    def chunks(self, size: int = 4096) -> Iterator[EdgeStream]:
        for start in range(0, len(self), size):
            yield self[start:start + size]

    def select(self, mask) -> EdgeStream:
        """Order-preserving sub-stream of the updates where ``mask`` holds."""
        return EdgeStream(
            self.n, self.sign[mask], self.u[mask], self.v[mask], self.w[mask],
            weighted=self.weighted, W=self.W, metadata=self.metadata, validate=False,
        )

    def to_array(self) -> np.ndarray:
        return np.column_stack([self.sign, self.u, self.v, self.w])

    def snapshot(self) -> GraphSnapshot:
        """The final graph after replaying every update."""
        present: dict[tuple[int, int], int] = {}
        for s, a, b, c in zip(self.sign.tolist(), self.u.tolist(), self.v.tolist(), self.w.tolist()):
            if s == INSERT:
                present[(a, b)] = c
            else:
                present.pop((a, b), None)
        return GraphSnapshot(self.n, [WeightedEdge(a, b, c) for (a, b), c in present.items()])

    def net_edge_count(self) -> int:
        return int(self.sign.sum())

    def __eq__(self, other):
        if not isinstance(other, EdgeStream):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.to_array(), other.to_array())

    def __repr__(self):
        return f"EdgeStream(n={self.n}, updates={len(self)}, weighted={self.weighted})"


@dataclass(frozen=True)
class GraphSnapshot:
    """A static simple graph; edges carry positive integer weights."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        edges = frozenset(e if isinstance(e, WeightedEdge) else WeightedEdge(*e) for e in self.edges)
        pairs = {e.pair for e in edges}
        if len(pairs) != len(edges):
            raise StreamError("parallel edges with different weights")
        for e in edges:
            if e.v >= self.n:
                raise StreamError(f"edge {e.pair} outside [0, {self.n})")
        object.__setattr__(self, "edges", edges)
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for e in sorted(edges):
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        object.__setattr__(self, "adjacency", tuple(tuple(a) for a in adj))
        object.__setattr__(self, "_weights", {e.pair: e.w for e in edges})

    @classmethod
    def from_edges(cls, n, edges) -> GraphSnapshot:
        return cls(n, frozenset(WeightedEdge(*e) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    def weight(self, u: int, v: int) -> int:
        return self._weights[(min(u, v), max(u, v))]

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._weights

    def sorted_edges(self) -> list[WeightedEdge]:
        return sorted(self.edges)

    def edge_array(self) -> np.ndarray:
        """``(m, 3)`` int64 array of ``u, v, w`` rows in canonical order."""
        rows = [(e.u, e.v, e.w) for e in self.sorted_edges()]
        return np.array(rows, dtype=np.int64).reshape(-1, 3)

    def to_stream(self) -> EdgeStream:
        arr = self.edge_array()
        return EdgeStream(self.n, np.ones(len(arr), dtype=np.int64), arr[:, 0], arr[:, 1], arr[:, 2], validate=False)

    def induced(self, vertices) -> GraphSnapshot:
        keep = set(int(x) for x in vertices)
        return GraphSnapshot(self.n, frozenset(e for e in self.edges if e.u in keep and e.v in keep))
