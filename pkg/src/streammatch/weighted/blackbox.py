"""Unweighted matching-size estimators that plug into the weighted combinator.

A :class:`BlackBox` pairs an estimator template with its declared
approximation factor ``lam`` (the estimate ``v`` satisfies
``nu / lam <= v <= nu``) and per-instance failure probability ``delta``.
"""

from __future__ import annotations

from dataclasses import dataclass

from sklearn.base import clone

from ..estimators.arboricity import ArboricityMatchingEstimator
from ..estimators.base import StreamEstimator
from ..graph import INSERT, GraphSnapshot, WeightedEdge
from ..matching import greedy_matching, matching_number
from ..sketch.tutte import DoublingRankSketch


class _BufferedEstimator(StreamEstimator):
    """Keeps the net edge set of its sub-stream (verification only)."""

    def __init__(self, random_state=None):
        self.random_state = random_state

    def _begin(self, n):
        self.present_: dict[tuple[int, int], int] = {}

    def _update(self, chunk):
        for s, a, b in zip(chunk.sign.tolist(), chunk.u.tolist(), chunk.v.tolist()):
            if s == INSERT:
                self.present_[(a, b)] = 1
            else:
                self.present_.pop((a, b), None)

    def snapshot(self) -> GraphSnapshot:
        return GraphSnapshot(self.n_, frozenset(WeightedEdge(a, b) for a, b in self.present_))

    def _words(self):
        return {"edges": 2 * len(self.present_)}


class ExactMatchingSize(_BufferedEstimator):
    """Maximum matching size of the buffered graph (``lam = 1``)."""

    def _finalize(self):
        return matching_number(self.snapshot())


class GreedyMatchingSize(_BufferedEstimator):
    """Size of a greedy maximal matching in canonical edge order (``lam = 2``)."""

    def _finalize(self):
        return len(greedy_matching(self.snapshot().sorted_edges()))


class TutteDoublingSize(StreamEstimator):
    """``R/4`` from the doubling rank sketch, so that ``R/4 <= nu <= R/2``."""

    def __init__(self, random_state=None):
        self.random_state = random_state

    def _begin(self, n):
        self.sketch_ = DoublingRankSketch(n, 1 << max(n, 1).bit_length(), self._subseed("tutte"))

    def _update(self, chunk):
        self.sketch_.update_many(chunk.sign, chunk.u, chunk.v)

    def _finalize(self):
        return self.sketch_.doubling_value() / 4

    def _words(self):
        return {"tutte": self.sketch_.words}


@dataclass(frozen=True)
class BlackBox:
    """Estimator template plus its declared guarantee.

    ``make(seed)`` returns an independent unfitted copy with its own seed.
    """

    name: str
    lam: float
    delta: float
    template: StreamEstimator
    space: str = ""

    @property
    def n_passes(self) -> int:
        return self.template.n_passes

    def make(self, seed: int) -> StreamEstimator:
        est = clone(self.template)
        est.set_params(random_state=int(seed))
        return est


def exact_black_box() -> BlackBox:
    return BlackBox("exact", 1, 0.0, ExactMatchingSize(), "O(m) words, buffers the sub-stream")


def greedy_black_box() -> BlackBox:
    return BlackBox("greedy", 2, 0.0, GreedyMatchingSize(), "O(m) words, buffers the sub-stream")


def tutte_black_box() -> BlackBox:
    # the rank identity fails with probability about n^2 / p per level
    return BlackBox("tutte", 4, 1e-12, TutteDoublingSize(), "O(n^2) words, one rank sketch")


def arboricity_black_box(alpha: float = 1.0, eps: float = 0.25, passes: int = 1, delta: float = 0.2) -> BlackBox:
    template = ArboricityMatchingEstimator(alpha=alpha, eps=eps, passes=passes)
    return BlackBox("arboricity", template.factor, delta, template, "sublinear sketches")


def builtin_black_boxes(**arboricity_kwargs) -> dict[str, BlackBox]:
    return {
        "exact": exact_black_box(),
        "greedy": greedy_black_box(),
        "tutte": tutte_black_box(),
        "arboricity": arboricity_black_box(**arboricity_kwargs),
    }


def resolve_black_box(spec, **kwargs) -> BlackBox:
    if isinstance(spec, BlackBox):
        return spec
    boxes = {"exact": exact_black_box, "greedy": greedy_black_box, "tutte": tutte_black_box,
             "tutte_doubling": tutte_black_box, "arboricity": arboricity_black_box}
    if spec not in boxes:
        raise ValueError(f"unknown black box {spec!r}; choose from {sorted(boxes)}")
    return boxes[spec](**kwargs)
