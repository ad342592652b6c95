"""Two-pass maintenance of a matching of size up to ``n^alpha1``."""

from __future__ import annotations

import math

import numpy as np

from ..exceptions import RecoveryFailure, SamplerFailure
from ..graph import WeightedEdge
from ..sketch.l0 import EMPTY, L0SamplerBank
from ..sketch.recovery import FAIL, SparseRecovery
from .base import StreamEstimator


class SmallMatchingMaintainer(StreamEstimator):
    """Grow a matching from sampled edges, then finish it from a recovery sketch.

    Pass one draws ``2 (m / n^alpha2) n^alpha1`` uniform edges with ℓ₀
    samplers and keeps each one whose endpoints are both still free. If that
    reaches ``ceil(n^alpha1)`` edges the job is done. Otherwise pass two puts
    every edge between two free vertices into an ``n^alpha2``-sparse recovery
    sketch, and the decoded edges complete the matching greedily.

    The result (``estimate_`` / ``matching_``) is a list of vertex-disjoint
    edges that either has ``ceil(n^alpha1)`` edges or is maximal.
    ``n_edges`` is the edge count ``m`` used to size pass one.
    """

    n_passes = 2

    def __init__(self, alpha1: float = 0.5, alpha2: float = 1.0, n_edges: int = 1,
                 sampler_delta: float = 0.01, random_state=None):
        self.alpha1 = alpha1
        self.alpha2 = alpha2
        self.n_edges = n_edges
        self.sampler_delta = sampler_delta
        self.random_state = random_state

    def _begin(self, n):
        if not 0 < self.alpha1 <= self.alpha2 < 2:
            raise ValueError("need 0 < alpha1 <= alpha2 < 2")
        self.target_ = math.ceil(n ** self.alpha1) if n else 0
        count = max(1, math.ceil(2 * self.n_edges / n ** self.alpha2 * n ** self.alpha1)) if n else 1
        self.bank_ = L0SamplerBank(count, max(n * n, 1), self.sampler_delta, self._subseed("samplers"))
        self.recovery_ = None
        self.matching_ = []

    def _update(self, chunk):
        if self.pass_ == 0:
            self.bank_.update_many(chunk.u * self.n_ + chunk.v, chunk.sign)
        elif self.recovery_ is not None:
            free = (self._mate[chunk.u] < 0) & (self._mate[chunk.v] < 0)
            if free.any():
                self.recovery_.update_many(chunk.u[free] * self.n_ + chunk.v[free], chunk.sign[free])

    def _end_pass(self, index):
        if index != 0:
            return None
        draws = self.bank_.samples()
        self.failures_ = sum(1 for d in draws if d is FAIL)
        if self.failures_ > len(draws) / 2:
            raise SamplerFailure(f"{self.failures_} of {len(draws)} edge samplers failed")
        self._mate = np.full(self.n_, -1, dtype=np.int64)
        for d in draws:
            if len(self.matching_) >= self.target_:
                break
            if d is FAIL or d is EMPTY:
                continue
            self._take(d[0] // self.n_, d[0] % self.n_)
        self.pass1_size_ = len(self.matching_)
        if len(self.matching_) < self.target_:
            budget = max(1, math.ceil(self.n_ ** self.alpha2))
            self.recovery_ = SparseRecovery(max(self.n_ * self.n_, 1), budget, 0.01, self._subseed("recovery"))
        return set(np.flatnonzero(self._mate < 0).tolist())

    def _take(self, u, v) -> bool:
        u, v = int(u), int(v)
        if self._mate[u] >= 0 or self._mate[v] >= 0:
            return False
        self._mate[u], self._mate[v] = v, u
        self.matching_.append(WeightedEdge(u, v))
        return True

    def _finalize(self):
        if self.recovery_ is not None:
            got = self.recovery_.recover()
            if got is FAIL:
                raise RecoveryFailure(f"more than {self.recovery_.s} free-free edges remain")
            for coord in sorted(got):
                if len(self.matching_) >= self.target_:
                    break
                self._take(coord // self.n_, coord % self.n_)
        return list(self.matching_)

    def _words(self):
        out = {"samplers": self.bank_.words}
        if self.recovery_ is not None:
            out["recovery"] = self.recovery_.words
        return out


def maintain_small_matching(stream, n=None, m=None, alpha1=0.5, alpha2=1.0, seed=None):
    m = len(stream.snapshot().edges) if m is None else m
    return SmallMatchingMaintainer(alpha1, alpha2, m, random_state=seed).fit(stream, n_vertices=n).estimate_
