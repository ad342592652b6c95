"""Seeded instance generators producing :class:`EdgeStream` objects."""

from __future__ import annotations

import heapq
import math

import numpy as np

from ._random import rng_from_seed
from .exceptions import StreamError
from .graph import DELETE, INSERT, EdgeStream, pair_index


def _prufer_tree(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random labelled spanning tree of K_n as an ``(n-1, 2)`` array."""
    if n < 2:
        return np.zeros((0, 2), dtype=np.int64)
    if n == 2:
        return np.array([[0, 1]], dtype=np.int64)
    seq = rng.integers(0, n, size=n - 2).tolist()
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    out = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        out.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    out.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return np.array(out, dtype=np.int64)


def _insertions(n, pairs: np.ndarray, rng, metadata, weights=None) -> EdgeStream:
    order = rng.permutation(len(pairs))
    pairs = pairs[order]
    w = None if weights is None else np.asarray(weights)[order]
    return EdgeStream(
        n, np.ones(len(pairs), dtype=np.int64), pairs[:, 0], pairs[:, 1], w,
        metadata=metadata, validate=False,
    )


def gen_random_tree(n: int, seed: int) -> EdgeStream:
    """Insertion-only stream of a uniformly random spanning tree on ``n`` vertices."""
    rng = rng_from_seed(seed)
    tree = _prufer_tree(n, rng)
    return _insertions(n, tree, rng, {"kind": "tree", "arboricity": 1 if n > 1 else 0, "seed": seed})


def gen_bounded_arboricity(n: int, nu: int, seed: int) -> EdgeStream:
    """Union of ``nu`` independent random spanning trees, so arboricity <= nu."""
    if nu < 1:
        raise ValueError("nu must be at least 1")
    rng = rng_from_seed(seed)
    trees = [_prufer_tree(n, rng) for _ in range(nu)]
    pairs = np.concatenate(trees) if trees else np.zeros((0, 2), dtype=np.int64)
    pairs = np.sort(pairs, axis=1)
    _, first = np.unique(pair_index(pairs[:, 0], pairs[:, 1], n), return_index=True)
    pairs = pairs[np.sort(first)]
    return _insertions(n, pairs, rng, {"kind": "arboricity", "arboricity": nu, "seed": seed})


def gen_random_graph(n: int, m: int, seed: int) -> EdgeStream:
    """Uniform random simple graph with exactly ``m`` edges."""
    total = n * (n - 1) // 2
    if m > total:
        raise ValueError(f"cannot place {m} edges on {n} vertices")
    rng = rng_from_seed(seed)
    if 2 * m > total:
        iu, iv = np.triu_indices(n, 1)
        pick = rng.choice(total, size=m, replace=False)
        pairs = np.column_stack([iu[pick], iv[pick]]).astype(np.int64)
    else:
        keys = np.zeros(0, dtype=np.int64)
        while len(keys) < m:
            a = rng.integers(0, n, size=2 * (m - len(keys)) + 16)
            b = rng.integers(0, n, size=a.size)
            fresh = pair_index(a[a != b], b[a != b], n)
            merged = np.concatenate([keys, fresh])
            _, first = np.unique(merged, return_index=True)
            keys = merged[np.sort(first)]
        keys = keys[:m]
        pairs = np.column_stack([keys // n, keys % n])
    return _insertions(n, pairs.reshape(-1, 2), rng, {"kind": "random", "seed": seed})


WEIGHT_LAWS = ("uniform", "geometric")


def draw_weights(count: int, W: int, law: str, rng: np.random.Generator) -> np.ndarray:
    if W < 1:
        raise ValueError("W must be at least 1")
    if law == "uniform":
        return rng.integers(1, W + 1, size=count)
    if law == "geometric":
        # pick a weight class [2^i, 2^{i+1}) uniformly, then a weight inside it
        top = W.bit_length() - 1
        rank = rng.integers(0, top + 1, size=count)
        lo = np.left_shift(1, rank)
        hi = np.minimum(np.left_shift(1, rank + 1) - 1, W)
        return lo + (rng.random(count) * (hi - lo + 1)).astype(np.int64)
    raise ValueError(f"unknown weight law {law!r}; expected one of {WEIGHT_LAWS}")


def gen_weighted(base: EdgeStream, W: int, law: str, seed: int) -> EdgeStream:
    """Attach weights in ``[1, W]`` to ``base``; every update of an edge gets the same weight."""
    rng = rng_from_seed(seed)
    keys = pair_index(base.u, base.v, base.n)
    uniq, inverse = np.unique(keys, return_inverse=True)
    w = draw_weights(len(uniq), W, law, rng)[inverse]
    meta = dict(base.metadata, W=W, weight_law=law)
    return EdgeStream(base.n, base.sign, base.u, base.v, w, weighted=True, W=W, metadata=meta, validate=False)


def shuffle_with_deletions(stream: EdgeStream, churn: float, seed: int) -> EdgeStream:
    """Interleave decoy insert/delete pairs into ``stream``.

    About a ``churn`` fraction of the output updates belong to decoys: edges
    absent from the input that are inserted and later deleted. The original
    updates keep their relative order, so the final graph is unchanged.
    """
    if not 0 <= churn < 1:
        raise ValueError("churn must lie in [0, 1)")
    if churn == 0 or len(stream) == 0:
        return stream
    rng = rng_from_seed(seed)
    n = stream.n
    total_pairs = n * (n - 1) // 2
    used = set(pair_index(stream.u, stream.v, n).tolist())
    want = math.ceil(churn * len(stream) / (2 * (1 - churn)))
    want = min(want, total_pairs - len(used))
    decoys: list[tuple[int, int]] = []
    attempts = 0
    while len(decoys) < want and attempts < 50 * want + 100:
        attempts += 1
        a, b = rng.integers(0, n, size=2).tolist()
        if a == b:
            continue
        a, b = min(a, b), max(a, b)
        if a * n + b in used:
            continue
        used.add(a * n + b)
        decoys.append((a, b))
    k = len(decoys)
    if k == 0:
        return stream
    d = np.array(decoys, dtype=np.int64)
    if stream.weighted:
        wmax = stream.W if stream.W is not None else int(stream.w.max())
        dw = rng.integers(1, wmax + 1, size=k)
    else:
        dw = np.ones(k, dtype=np.int64)
    m = len(stream)
    pos = np.sort(rng.uniform(-0.5, m - 0.5, size=(k, 2)), axis=1)
    keys = np.concatenate([np.arange(m, dtype=np.float64), pos[:, 0], pos[:, 1]])
    tie = np.concatenate([np.ones(m), np.zeros(k), np.full(k, 2.0)])
    order = np.lexsort((tie, keys))
    sign = np.concatenate([stream.sign, np.full(k, INSERT), np.full(k, DELETE)])[order]
    u = np.concatenate([stream.u, d[:, 0], d[:, 0]])[order]
    v = np.concatenate([stream.v, d[:, 1], d[:, 1]])[order]
    w = np.concatenate([stream.w, dw, dw])[order]
    meta = dict(stream.metadata, churn=churn)
    out = EdgeStream(n, sign, u, v, w, weighted=stream.weighted, W=stream.W, metadata=meta)
    if out.snapshot().edges != stream.snapshot().edges:  # pragma: no cover - construction guarantees it
        raise StreamError("churned stream changed the final graph")
    return out


def planted_heavy(n: int, h: int, C: int, seed: int) -> EdgeStream:
    """``h`` disjoint stars with ``C+1`` leaves each; all other vertices isolated.

    The result has exactly ``h`` vertices of degree above ``C`` and no
    shallow edges.
    """
    if h * (C + 2) > n:
        raise ValueError("not enough vertices for the requested stars")
    rng = rng_from_seed(seed)
    perm = rng.permutation(n)
    pairs = []
    for s in range(h):
        block = perm[s * (C + 2):(s + 1) * (C + 2)]
        pairs.extend((int(block[0]), int(x)) for x in block[1:])
    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    return _insertions(n, arr, rng, {"kind": "planted_heavy", "h": h, "C": C, "arboricity": 1, "seed": seed})


def planted_shallow(n: int, s: int, seed: int, *, path_length: int = 1, stars: int = 0, C: int = 1) -> EdgeStream:
    """``s`` shallow edges laid out as vertex-disjoint paths of ``path_length`` edges.

    ``stars`` extra disjoint stars with ``C+1`` leaves add edges that are not
    shallow for degree bound ``C`` (``path_length <= 2`` keeps the paths
    shallow for every ``C >= 2``; single edges are shallow for ``C >= 1``).
    """
    per = path_length + 1
    paths = -(-s // path_length) if s else 0
    if paths * per + stars * (C + 2) > n:
        raise ValueError("not enough vertices for the requested paths")
    rng = rng_from_seed(seed)
    perm = rng.permutation(n)
    pairs = []
    for p in range(paths):
        block = perm[p * per:(p + 1) * per]
        pairs.extend((int(block[i]), int(block[i + 1])) for i in range(path_length))
    pairs = pairs[:s]
    base = paths * per
    for k in range(stars):
        block = perm[base + k * (C + 2):base + (k + 1) * (C + 2)]
        pairs.extend((int(block[0]), int(x)) for x in block[1:])
    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    meta = {"kind": "planted_shallow", "s": s, "stars": stars, "C": C, "arboricity": 1, "seed": seed}
    return _insertions(n, arr, rng, meta)
