"""Matching size and weight estimation in dynamic graph streams.

Subpackages: :mod:`streammatch.sketch` (linear sketches),
:mod:`streammatch.estimators` (unweighted estimators),
:mod:`streammatch.weighted` (the rank combinator) and
:mod:`streammatch.harness` (stream files, reports, CLI).
"""

from .exceptions import (
    ConsistencyError,
    EstimatorFailure,
    InstanceTooLarge,
    NonIntegral,
    ParseError,
    PreconditionWarning,
    RecoveryFailure,
    SamplerFailure,
    SelfLoopError,
    StreamError,
    WeightOutOfRange,
)
from .graph import DELETE, INSERT, EdgeStream, EdgeUpdate, GraphSnapshot, WeightedEdge

__version__ = "0.1.0"

__all__ = [
    "DELETE",
    "INSERT",
    "ConsistencyError",
    "EdgeStream",
    "EdgeUpdate",
    "EstimatorFailure",
    "GraphSnapshot",
    "InstanceTooLarge",
    "NonIntegral",
    "ParseError",
    "PreconditionWarning",
    "RecoveryFailure",
    "SamplerFailure",
    "SelfLoopError",
    "StreamError",
    "WeightOutOfRange",
    "WeightedEdge",
    "__version__",
]
