"""Dynamic-stream estimators of the unweighted matching size."""

from .arboricity import (
    ArboricityMatchingEstimator,
    arboricity_matching_estimate,
    eta_composed,
    eta_sandwich,
    light_degree_bound,
)
from .base import Regime, StreamEstimator, ThresholdedEstimate
from .sampling import (
    HeavyEstimator,
    ShallowOnePassEstimator,
    ShallowTwoPassEstimator,
    heavy_estimate,
    shallow_estimate_onepass,
    shallow_estimate_twopass,
)
from .small_matching import SmallMatchingMaintainer, maintain_small_matching
from .tree import TreeMatchingEstimator, tree_matching_estimate

__all__ = [
    "ArboricityMatchingEstimator",
    "HeavyEstimator",
    "Regime",
    "ShallowOnePassEstimator",
    "ShallowTwoPassEstimator",
    "SmallMatchingMaintainer",
    "StreamEstimator",
    "ThresholdedEstimate",
    "TreeMatchingEstimator",
    "arboricity_matching_estimate",
    "eta_composed",
    "eta_sandwich",
    "heavy_estimate",
    "light_degree_bound",
    "maintain_small_matching",
    "shallow_estimate_onepass",
    "shallow_estimate_twopass",
    "tree_matching_estimate",
]
