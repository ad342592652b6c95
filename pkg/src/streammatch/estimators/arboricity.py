"""Matching-size estimation for graphs of bounded arboricity.

Small matchings are read off Tutte-matrix rank decisions. Large ones are
estimated through ``max(h, s)``, which sandwiches the matching number:
``max(h, s) / eta <= nu <= h + s``.
"""

from __future__ import annotations

import math
import warnings

from ..exceptions import PreconditionWarning
from ..sketch.tutte import DoublingRankSketch
from .base import StreamEstimator
from .sampling import MAX_EPS, HeavyEstimator, ShallowOnePassEstimator, ShallowTwoPassEstimator


def light_degree_bound(alpha: float) -> int:
    """``C = ceil(2 alpha) + 3``; twice the arboricity bounds the average degree."""
    return math.ceil(2 * alpha) + 3


def eta_composed(alpha: float) -> float:
    """Divisor used by the composed estimator."""
    return 2.5 * math.ceil(2 * alpha + 3) + 5.75


def eta_sandwich(C: int) -> float:
    """Constant of the ``max(h, s) / eta <= nu`` sandwich for degree bound ``C``."""
    return 1.25 * C + 0.75


def threshold_for(n: int, passes: int) -> float:
    return n ** (2 / 5) if passes == 1 else n ** (1 / 3)


def next_power_of_two_above(x: int) -> int:
    return 1 << int(x).bit_length()


class ArboricityMatchingEstimator(StreamEstimator):
    """Composed estimator for graphs with arboricity at most ``alpha``.

    Parameters mirror the guarantee: ``T = n^(2/5)`` for one pass and
    ``n^(1/3)`` for two, ``C = ceil(2 alpha) + 3`` and the divisor
    ``eta = 2.5 ceil(2 alpha + 3) + 5.75``.

    The Tutte rank sketch decides whether ``rank >= k_thr = ceil(3T/(1-eps))``.

    * If not, the doubling decisions give ``R`` with ``R/4 <= nu <= R/2`` and
      the estimate is ``R/4``.
    * Otherwise the estimate is ``max(h_hat, s_hat) / ((1 + eps) eta)``.

    When ``3T/(1-eps) >= n`` the sampling estimators would need more than
    the whole population, so only the doubling branch is run, with enough
    rank levels to cover every ``nu <= n/2``.

    ``branch_`` records which branch produced ``estimate_``.
    """

    def __init__(self, alpha: float = 1.0, eps: float = 0.25, passes: int = 1,
                 shallow_repetitions: int = 1, random_state=None):
        self.alpha = alpha
        self.eps = eps
        self.passes = passes
        self.shallow_repetitions = shallow_repetitions
        self.random_state = random_state

    @property
    def n_passes(self):
        return self.passes

    def _begin(self, n):
        if self.passes not in (1, 2):
            raise ValueError("passes must be 1 or 2")
        if not 0 < self.eps < MAX_EPS:
            warnings.warn(f"eps={self.eps} is outside (0, 1/sqrt(3))", PreconditionWarning, stacklevel=3)
        if self.passes == 1 and n < (16 * self.alpha / self.eps) ** 5:
            warnings.warn(
                f"n={n} is below (16 alpha/eps)^5 = {(16 * self.alpha / self.eps) ** 5:.3g}; "
                "the one-pass guarantee is not proven here",
                PreconditionWarning, stacklevel=3,
            )
        self.T_ = threshold_for(n, self.passes)
        self.C_ = light_degree_bound(self.alpha)
        self.eta_ = eta_composed(self.alpha)
        self.eta_sandwich_ = eta_sandwich(self.C_)
        bound = 3 * self.T_ / (1 - self.eps)
        self.k_threshold_ = math.ceil(bound)
        self.degenerate_ = bound >= n
        rank_seed = self._subseed("tutte")
        if self.degenerate_:
            self.rank_ = DoublingRankSketch(n, next_power_of_two_above(max(n, 1)), rank_seed)
            self.heavy_ = self.shallow_ = None
            return
        k_max = 1 << (self.k_threshold_.bit_length() - 1)
        self.rank_ = DoublingRankSketch(n, k_max, rank_seed, extra=self.k_threshold_)
        self.heavy_ = HeavyEstimator(self.C_, self.T_, self.eps, self._subseed("heavy"))
        if self.passes == 1:
            self.shallow_ = ShallowOnePassEstimator(
                self.C_, self.T_, self.eps, self.alpha, repetitions=self.shallow_repetitions,
                random_state=self._subseed("shallow"),
            )
        else:
            self.shallow_ = ShallowTwoPassEstimator(self.C_, self.T_, self.eps, self.alpha, random_state=self._subseed("shallow"))
        with warnings.catch_warnings():
            # the composed estimator already reported its own preconditions
            warnings.simplefilter("ignore", PreconditionWarning)
            self.heavy_.begin(n)
            self.shallow_.begin(n)

    def _update(self, chunk):
        if self.pass_ == 0:
            self.rank_.update_many(chunk.sign, chunk.u, chunk.v)
            if self.heavy_ is not None:
                self.heavy_.update(chunk)
        if self.shallow_ is not None and self.pass_ < self.shallow_.n_passes:
            self.shallow_.update(chunk)

    def _end_pass(self, index):
        out = None
        if self.heavy_ is not None and index == 0:
            self.heavy_.end_pass()
        if self.shallow_ is not None and index < self.shallow_.n_passes:
            out = self.shallow_.end_pass()
        return out

    def _finalize(self):
        self.rank_decisions_ = self.rank_.decisions()
        doubling = self.rank_.doubling_value()
        self.doubling_value_ = doubling
        if self.degenerate_ or not self.rank_decisions_[self.k_threshold_]:
            self.branch_ = "doubling"
            return doubling / 4
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PreconditionWarning)
            self.h_hat_ = self.heavy_.finalize()
            self.s_hat_ = self.shallow_.finalize()
        self.branch_ = "sampling"
        return max(self.h_hat_.value, self.s_hat_.value) / ((1 + self.eps) * self.eta_)

    def _words(self):
        out = {"tutte": self.rank_.words}
        if self.heavy_ is not None:
            out.update({f"heavy.{k}": v for k, v in self.heavy_.words_.items()})
            out.update({f"shallow.{k}": v for k, v in self.shallow_.words_.items()})
        return out

    @property
    def factor(self) -> float:
        """Multiplicative guarantee ``nu / estimate`` of the sampling branch."""
        return 2 * (1 + self.eps) * self.eta_ / (1 - self.eps) if hasattr(self, "eta_") else \
            2 * (1 + self.eps) * eta_composed(self.alpha) / (1 - self.eps)


def arboricity_matching_estimate(stream, n=None, alpha=1.0, eps=0.25, passes=1, seed=None) -> float:
    return ArboricityMatchingEstimator(alpha, eps, passes, random_state=seed).fit(stream, n_vertices=n).estimate_
