"""Streaming estimator protocol on top of ``sklearn.base.BaseEstimator``.

An estimator is driven pass by pass::

    est.begin(n)                  # allocate sketches for n vertices
    for each pass:
        est.update(chunk) ...     # feed EdgeStream chunks in order
        est.end_pass()            # returns what the next pass subscribes to
    est.finalize()                # sets est.estimate_

``fit`` does exactly this, replaying the same stream for every pass.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .._random import derive_seed, resolve_seed
from ..graph import EdgeStream
from ..validation import check_stream

CHUNK = 4096


class Regime(str, enum.Enum):
    ACCURATE = "ACCURATE"
    BELOW_THRESHOLD = "BELOW_THRESHOLD"


@dataclass(frozen=True)
class ThresholdedEstimate:
    """A value with a two-regime guarantee around a threshold ``T``.

    ``ACCURATE`` claims ``value`` is within ``(1 ± eps)`` of the truth;
    ``BELOW_THRESHOLD`` claims the truth is below ``T`` and ``value < 3T``.
    The regime is read off the value itself: at or above ``T`` it is
    reported as accurate.
    """

    value: float
    regime: Regime
    T: float
    eps: float

    @classmethod
    def from_value(cls, value: float, T: float, eps: float) -> ThresholdedEstimate:
        regime = Regime.ACCURATE if value >= T else Regime.BELOW_THRESHOLD
        return cls(float(value), regime, float(T), float(eps))

    def __float__(self):
        return self.value

    def holds_for(self, truth: float) -> bool:
        """Whether the regime's claim is true for the given ground truth."""
        if self.regime is Regime.ACCURATE:
            return (1 - self.eps) * truth <= self.value <= (1 + self.eps) * truth
        return truth < self.T and self.value < 3 * self.T


class StreamEstimator(BaseEstimator):
    """Base class; subclasses implement ``_begin``, ``_update``, ``_end_pass``, ``_finalize``."""

    n_passes = 1

    # -- protocol ---------------------------------------------------------
    def begin(self, n: int) -> StreamEstimator:
        self.n_ = int(n)
        self.seed_ = resolve_seed(getattr(self, "random_state", None))
        self.subseeds_: dict[str, int] = {}
        self.pass_ = 0
        self._begin(self.n_)
        return self

    def update(self, chunk: EdgeStream) -> None:
        if chunk.n != self.n_:
            raise ValueError(f"chunk has n={chunk.n}, estimator was started with n={self.n_}")
        self._update(chunk)

    def end_pass(self):
        out = self._end_pass(self.pass_)
        self.pass_ += 1
        return out

    def finalize(self):
        if self.pass_ < self.n_passes:
            raise RuntimeError(f"{type(self).__name__} needs {self.n_passes} passes, saw {self.pass_}")
        self.estimate_ = self._finalize()
        return self.estimate_

    # -- sklearn-style entry points ------------------------------------------
    def fit(self, X, y=None, n_vertices: int | None = None):
        stream = check_stream(X, n_vertices)
        return self.fit_passes([stream] * self.n_passes)

    def fit_passes(self, passes) -> StreamEstimator:
        """Run with an explicit stream per pass (they should be replays)."""
        if len(passes) != self.n_passes:
            raise ValueError(f"expected {self.n_passes} pass streams, got {len(passes)}")
        first = check_stream(passes[0])
        self.begin(first.n)
        for p in passes:
            for chunk in check_stream(p).chunks(CHUNK):
                self.update(chunk)
            self.end_pass()
        self.finalize()
        return self

    def partial_fit(self, X, y=None, n_vertices: int | None = None):
        """Feed more updates in a one-pass run; call :meth:`finalize_pass` or ``predict`` to finish."""
        if self.n_passes != 1:
            raise RuntimeError("partial_fit is only available for one-pass estimators")
        stream = check_stream(X, n_vertices)
        if not hasattr(self, "n_") or getattr(self, "_closed", False):
            self.begin(stream.n)
            self._closed = False
        for chunk in stream.chunks(CHUNK):
            self.update(chunk)
        return self

    def predict(self, X=None):
        """Estimate for ``X`` (fitting on it first), or the stored estimate."""
        if X is not None:
            return self.fit(X).estimate_
        if hasattr(self, "n_") and not hasattr(self, "estimate_") and self.pass_ == 0 and self.n_passes == 1:
            self.end_pass()
            self.finalize()
            self._closed = True
        check_is_fitted(self, "estimate_")
        return self.estimate_

    # -- helpers ----------------------------------------------------------
    def _subseed(self, label: str) -> int:
        s = derive_seed(self.seed_, type(self).__name__, label)
        self.subseeds_[label] = s
        return s

    @property
    def words_(self) -> dict[str, int]:
        """Per-structure word counts of the current state."""
        return {name: int(w) for name, w in self._words().items()}

    def _words(self) -> dict[str, int]:
        return {}

    @property
    def total_words_(self) -> int:
        return sum(self.words_.values())

    def __sklearn_is_fitted__(self):
        return hasattr(self, "estimate_")

    # pass hooks default to no-ops
    def _begin(self, n):
        pass

    def _update(self, chunk):
        pass

    def _end_pass(self, index):
        return None

    def _finalize(self):
        raise NotImplementedError
