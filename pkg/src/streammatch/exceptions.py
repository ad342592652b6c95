"""Exception hierarchy shared by the package."""


class StreamError(ValueError):
    """A stream is malformed or violates the dynamic-stream model."""


class SelfLoopError(StreamError):
    pass


class ConsistencyError(StreamError):
    """An update breaks the 0/1 multiplicity or weight-consistency rule."""

    def __init__(self, message, *, position=None, edge=None, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.position = position
        self.edge = edge
        self.line = line


class ParseError(StreamError):
    def __init__(self, message, *, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class WeightOutOfRange(ValueError):
    pass


class InstanceTooLarge(ValueError):
    pass


class NonIntegral(ValueError):
    pass


class EstimatorFailure(RuntimeError):
    """A randomized estimator could not produce an answer; rerun with a new seed."""

    def __init__(self, message, *, rank=None):
        super().__init__(message if rank is None else f"rank {rank}: {message}")
        self.rank = rank


class SamplerFailure(EstimatorFailure):
    pass


class RecoveryFailure(EstimatorFailure):
    pass


class PreconditionWarning(UserWarning):
    """Parameters fall outside the regime where the stated guarantee is proven."""
