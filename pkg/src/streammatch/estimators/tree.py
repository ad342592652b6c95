"""Matching size of forests from an ℓ₀ estimate of ``deg(v) - 1``."""

from __future__ import annotations

import numpy as np

from ..sketch.l0 import L0Estimator
from .base import StreamEstimator


class TreeMatchingEstimator(StreamEstimator):
    """One-pass estimator for forests without isolated vertices.

    The vector ``d_v = deg(v) - 1`` starts at ``-1`` everywhere (every
    coordinate is pre-seeded) and each edge update moves two coordinates. Its
    support is the set of non-leaf vertices, whose count ``h`` satisfies
    ``h/2 <= nu <= h`` when every component has at least three vertices.
    The estimate ``l0 / (2(1+eps))`` is then a lower bound on ``nu`` within a
    factor ``2(1+eps)/(1-eps)`` whenever the ℓ₀ sketch is accurate.

    Graphs that are not such forests get an estimate without any guarantee.
    """

    def __init__(self, eps: float = 0.1, delta: float = 0.05, random_state=None):
        self.eps = eps
        self.delta = delta
        self.random_state = random_state

    def _begin(self, n):
        self.sketch_ = L0Estimator(max(n, 1), self.eps, self.delta, self._subseed("l0"))
        if n:
            self.sketch_.update_many(np.arange(n), np.full(n, -1))

    def _update(self, chunk):
        if len(chunk) == 0:
            return
        idx = np.concatenate([chunk.u, chunk.v])
        self.sketch_.update_many(idx, np.concatenate([chunk.sign, chunk.sign]))

    def _finalize(self):
        self.l0_ = self.sketch_.estimate()
        return self.l0_ / (2 * (1 + self.eps))

    def _words(self):
        return {"l0": self.sketch_.words}

    @property
    def factor(self) -> float:
        return 2 * (1 + self.eps) / (1 - self.eps)


def tree_matching_estimate(stream, n=None, eps=0.1, delta=0.05, seed=None) -> float:
    return TreeMatchingEstimator(eps, delta, seed).fit(stream, n_vertices=n).estimate_
