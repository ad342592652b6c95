"""Sampling estimators for heavy vertices and shallow edges.

A vertex is heavy when its degree exceeds ``C`` and an edge is shallow when
both endpoints have degree at most ``C``. Each estimator answers with a
:class:`ThresholdedEstimate` around a threshold ``T``.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from .._random import rng_from_seed
from ..exceptions import PreconditionWarning, RecoveryFailure, SamplerFailure
from ..sketch.l0 import EMPTY, L0SamplerBank
from ..sketch.recovery import FAIL, SparseRecovery
from .base import StreamEstimator, ThresholdedEstimate

MAX_EPS = 1 / math.sqrt(3)


def _warn_eps(eps):
    if eps > MAX_EPS:
        warnings.warn(f"eps={eps} exceeds 1/sqrt(3); the two-regime guarantee is not proven", PreconditionWarning, stacklevel=3)


class _VertexDegrees:
    """Exact degrees of a fixed sorted vertex subset."""

    def __init__(self, vertices: np.ndarray):
        self.vertices = np.unique(np.asarray(vertices, dtype=np.int64))
        self.degree = np.zeros(self.vertices.size, dtype=np.int64)

    def _locate(self, x):
        pos = np.searchsorted(self.vertices, x)
        pos = np.minimum(pos, max(self.vertices.size - 1, 0))
        hit = self.vertices.size > 0
        return pos, (self.vertices[pos] == x) if hit else np.zeros(x.shape, bool)

    def update(self, chunk):
        for end in (chunk.u, chunk.v):
            pos, hit = self._locate(end)
            np.add.at(self.degree, pos[hit], chunk.sign[hit])

    def of(self, x) -> np.ndarray:
        pos, hit = self._locate(np.asarray(x, dtype=np.int64))
        if not np.all(hit):
            raise KeyError("vertex not tracked")
        return self.degree[pos]

    @property
    def words(self) -> int:
        return 2 * self.vertices.size


def heavy_sample_size(n: int, T: float, eps: float) -> int:
    if n <= 1:
        return n
    return min(n, math.ceil(3 * math.log(n) / eps**2 * n / T))


class HeavyEstimator(StreamEstimator):
    """Estimate the number of vertices with degree above ``C``.

    ``|S| = ceil(3 ln n / eps^2 * n / T)`` vertices (capped at ``n``) are drawn
    before the stream and their degrees tracked exactly; the heavy count in
    ``S`` is rescaled by ``n / |S|``.
    """

    def __init__(self, C: int = 5, T: float = 100.0, eps: float = 0.25, random_state=None):
        self.C = C
        self.T = T
        self.eps = eps
        self.random_state = random_state

    def _begin(self, n):
        _warn_eps(self.eps)
        size = heavy_sample_size(n, self.T, self.eps)
        rng = rng_from_seed(self._subseed("sample"))
        self.sample_ = _VertexDegrees(rng.choice(n, size=size, replace=False) if size else np.zeros(0, np.int64))

    def _update(self, chunk):
        self.sample_.update(chunk)

    def _finalize(self):
        size = self.sample_.vertices.size
        self.count_ = int(np.count_nonzero(self.sample_.degree > self.C))
        value = self.n_ / size * self.count_ if size else 0.0
        return ThresholdedEstimate.from_value(value, self.T, self.eps)

    def _words(self):
        return {"degrees": self.sample_.words}


def shallow_twopass_samples(n: int, T: float, eps: float, alpha: float) -> int:
    if n <= 1:
        return 1
    return math.ceil(3 * math.log(n) / eps**2 * alpha * n / T)


class ShallowTwoPassEstimator(StreamEstimator):
    """Two-pass estimate of the number of shallow edges.

    Pass one draws edges with independent ℓ₀ samplers over the edge
    indicator vector and keeps an exact signed edge counter. Pass two tracks
    the degrees of the sampled endpoints. The estimate is
    ``m * (#shallow samples) / (#successful samples)``.

    When the requested number of samples reaches ``alpha * n``, which bounds
    ``m`` under the precondition, pass one instead decodes the whole edge set
    from an ``alpha n``-sparse recovery sketch (``exact_mode_``); that is
    cheaper than the samplers and makes the count exact.
    """

    n_passes = 2

    def __init__(self, C: int = 5, T: float = 100.0, eps: float = 0.25, alpha: float = 1.0,
                 sampler_delta: float = 0.01, random_state=None):
        self.C = C
        self.T = T
        self.eps = eps
        self.alpha = alpha
        self.sampler_delta = sampler_delta
        self.random_state = random_state

    def _begin(self, n):
        _warn_eps(self.eps)
        count = shallow_twopass_samples(n, self.T, self.eps, self.alpha)
        cap = max(1, math.ceil(self.alpha * n))
        self.exact_mode_ = count >= cap
        if self.exact_mode_:
            self.bank_ = SparseRecovery(max(n * n, 1), cap, self.sampler_delta, self._subseed("recovery"))
        else:
            self.bank_ = L0SamplerBank(count, max(n * n, 1), self.sampler_delta, self._subseed("samplers"))
        self.edge_count_ = 0
        self.degrees_ = None

    def _update(self, chunk):
        if self.pass_ == 0:
            self.edge_count_ += int(chunk.sign.sum())
            self.bank_.update_many(chunk.u * self.n_ + chunk.v, chunk.sign)
        else:
            self.degrees_.update(chunk)

    def _end_pass(self, index):
        if index != 0:
            return None
        if self.exact_mode_:
            got = self.bank_.recover()
            if got is FAIL:
                raise RecoveryFailure(f"more than {self.bank_.s} edges; the graph violates m <= alpha n")
            self.failures_ = 0
            coords = np.array(sorted(got), dtype=np.int64)
        else:
            draws = self.bank_.samples()
            self.failures_ = sum(1 for d in draws if d is FAIL)
            if self.failures_ > len(draws) / 2:
                raise SamplerFailure(f"{self.failures_} of {len(draws)} edge samplers failed")
            coords = np.array([d[0] for d in draws if d is not FAIL and d is not EMPTY], dtype=np.int64)
        self.sampled_edges_ = np.column_stack([coords // self.n_, coords % self.n_]) if coords.size else np.zeros((0, 2), np.int64)
        self.degrees_ = _VertexDegrees(self.sampled_edges_.reshape(-1))
        return set(self.degrees_.vertices.tolist())

    def _finalize(self):
        m = self.edge_count_
        if m > self.alpha * self.n_:
            warnings.warn(f"m={m} exceeds alpha*n={self.alpha * self.n_}", PreconditionWarning, stacklevel=2)
        k = len(self.sampled_edges_)
        if k == 0:
            self.shallow_samples_ = 0
            return ThresholdedEstimate.from_value(0.0, self.T, self.eps)
        du = self.degrees_.of(self.sampled_edges_[:, 0])
        dv = self.degrees_.of(self.sampled_edges_[:, 1])
        self.shallow_samples_ = int(np.count_nonzero((du <= self.C) & (dv <= self.C)))
        return ThresholdedEstimate.from_value(m * self.shallow_samples_ / k, self.T, self.eps)

    def _words(self):
        out = {"samplers": self.bank_.words, "edge_counter": 1}
        if self.degrees_ is not None:
            out["degrees"] = self.degrees_.words
        return out


def shallow_onepass_sample_size(n: int, T: float, eps: float) -> int:
    return min(n, math.ceil(4 * n / (eps * math.sqrt(T))))


class ShallowOnePassEstimator(StreamEstimator):
    """One-pass estimate of the number of shallow edges from an induced subgraph.

    A vertex set ``S`` of size ``ceil(4n / (eps sqrt(T)))`` is drawn up front.
    The edges of ``G[S]`` go into an ``alpha |S|``-sparse recovery sketch
    (the induced subgraph may be larger mid-stream) and the degrees of
    ``S`` are tracked exactly. The count ``X`` of recovered shallow edges is
    rescaled by ``1/p`` with ``p = |S|(|S|-1) / (n(n-1))``. With
    ``repetitions > 1`` the median of independent copies is returned.
    """

    def __init__(self, C: int = 5, T: float = 100.0, eps: float = 0.25, alpha: float = 1.0,
                 repetitions: int = 1, sample_size: int | None = None, recovery_delta: float = 0.01,
                 random_state=None):
        self.C = C
        self.T = T
        self.eps = eps
        self.alpha = alpha
        self.repetitions = repetitions
        self.sample_size = sample_size
        self.recovery_delta = recovery_delta
        self.random_state = random_state

    def _begin(self, n):
        _warn_eps(self.eps)
        if self.T <= (16 * self.C / self.eps) ** 2:
            warnings.warn(
                f"T={self.T} is not above (16C/eps)^2={(16 * self.C / self.eps) ** 2:.0f}",
                PreconditionWarning, stacklevel=3,
            )
        size = self.sample_size if self.sample_size is not None else shallow_onepass_sample_size(n, self.T, self.eps)
        size = min(int(size), n)
        self.size_ = size
        self.copies_ = []
        budget = max(1, math.ceil(self.alpha * size))
        for r in range(self.repetitions):
            rng = rng_from_seed(self._subseed(f"sample{r}"))
            verts = np.sort(rng.choice(n, size=size, replace=False)) if size else np.zeros(0, np.int64)
            member = _VertexDegrees(verts)
            rec = SparseRecovery(max(n * n, 1), budget, self.recovery_delta, self._subseed(f"recovery{r}"))
            self.copies_.append((member, rec))

    def _update(self, chunk):
        for member, rec in self.copies_:
            member.update(chunk)
            if member.vertices.size == 0:
                continue
            _, hu = member._locate(chunk.u)
            _, hv = member._locate(chunk.v)
            inside = hu & hv
            if inside.any():
                rec.update_many(chunk.u[inside] * self.n_ + chunk.v[inside], chunk.sign[inside])

    def _finalize(self):
        n, size = self.n_, self.size_
        if size < 2:
            return ThresholdedEstimate.from_value(0.0, self.T, self.eps)
        p = size * (size - 1) / (n * (n - 1))
        values = []
        self.counts_ = []
        for r, (member, rec) in enumerate(self.copies_):
            got = rec.recover()
            if got is FAIL:
                raise RecoveryFailure(f"induced subgraph of copy {r} exceeds the recovery budget {rec.s}")
            coords = np.array(sorted(got), dtype=np.int64)
            if coords.size == 0:
                x = 0
            else:
                du = member.of(coords // n)
                dv = member.of(coords % n)
                x = int(np.count_nonzero((du <= self.C) & (dv <= self.C)))
            self.counts_.append(x)
            values.append(x / p)
        return ThresholdedEstimate.from_value(float(np.median(values)), self.T, self.eps)

    def _words(self):
        return {
            "degrees": sum(m.words for m, _ in self.copies_),
            "recovery": sum(r.words for _, r in self.copies_),
        }


def heavy_estimate(stream, n=None, C=5, T=100.0, eps=0.25, seed=None) -> ThresholdedEstimate:
    return HeavyEstimator(C, T, eps, seed).fit(stream, n_vertices=n).estimate_


def shallow_estimate_twopass(stream, n=None, C=5, T=100.0, eps=0.25, alpha=1.0, seed=None) -> ThresholdedEstimate:
    return ShallowTwoPassEstimator(C, T, eps, alpha, random_state=seed).fit(stream, n_vertices=n).estimate_


def shallow_estimate_onepass(stream, n=None, C=5, T=100.0, eps=0.25, alpha=1.0, seed=None, **kw) -> ThresholdedEstimate:
    return ShallowOnePassEstimator(C, T, eps, alpha, random_state=seed, **kw).fit(stream, n_vertices=n).estimate_
