"""Linear sketches for turnstile streams."""

from .base import LinearSketch
from .l0 import EMPTY, L0Estimator, L0Sampler, L0SamplerBank, l0_estimate, l0_sample, l0_update
from .recovery import FAIL, SparseRecovery, sparse_recover
from .tutte import (
    DoublingRankSketch,
    TutteRankSketch,
    matching_size_by_doubling,
    rank_decision,
    tutte_update,
)

__all__ = [
    "EMPTY",
    "FAIL",
    "DoublingRankSketch",
    "L0Estimator",
    "L0Sampler",
    "L0SamplerBank",
    "LinearSketch",
    "SparseRecovery",
    "TutteRankSketch",
    "l0_estimate",
    "l0_sample",
    "l0_update",
    "matching_size_by_doubling",
    "rank_decision",
    "sparse_recover",
    "tutte_update",
]
