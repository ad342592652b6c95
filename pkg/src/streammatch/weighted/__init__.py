"""Weighted matching estimation over pluggable unweighted estimators."""

from .blackbox import (
    BlackBox,
    ExactMatchingSize,
    GreedyMatchingSize,
    TutteDoublingSize,
    arboricity_black_box,
    builtin_black_boxes,
    exact_black_box,
    greedy_black_box,
    resolve_black_box,
    tutte_black_box,
)
from .checks import CheckResult, black_box_contract, check_report_structure, check_rank_structure
from .combinator import (
    CombinatorParams,
    RankReport,
    WeightedMatchingEstimator,
    combinator_params,
    lower_bound_divisor,
    run_combinator,
    scan_ranks,
)
from .ranks import RankPartition, rank_of, ranks_of, representative, verify_partition
from .reference import GroundTruthDecomposition, uehara_chen_reference

__all__ = [
    "BlackBox",
    "CheckResult",
    "CombinatorParams",
    "ExactMatchingSize",
    "GreedyMatchingSize",
    "GroundTruthDecomposition",
    "RankPartition",
    "RankReport",
    "TutteDoublingSize",
    "WeightedMatchingEstimator",
    "arboricity_black_box",
    "black_box_contract",
    "builtin_black_boxes",
    "check_rank_structure",
    "check_report_structure",
    "combinator_params",
    "exact_black_box",
    "greedy_black_box",
    "lower_bound_divisor",
    "rank_of",
    "ranks_of",
    "representative",
    "resolve_black_box",
    "run_combinator",
    "scan_ranks",
    "tutte_black_box",
    "uehara_chen_reference",
    "verify_partition",
]
