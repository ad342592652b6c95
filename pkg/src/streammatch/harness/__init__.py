"""Stream files, run reports, the experiment runner and the CLI."""

from .report import RunReport, ratio_of
from .runner import build_estimator, evaluate, exact_values, generate, run_estimator, space_profile
from .selftest import run_selftest
from .streamfile import StreamFile, StreamSource, format_stream, parse_stream, read_stream, write_stream

__all__ = [
    "RunReport",
    "StreamFile",
    "StreamSource",
    "build_estimator",
    "evaluate",
    "exact_values",
    "format_stream",
    "generate",
    "parse_stream",
    "ratio_of",
    "read_stream",
    "run_estimator",
    "run_selftest",
    "space_profile",
    "write_stream",
]
