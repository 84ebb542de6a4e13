"""doorflow: pedestrian counterflow through a door bottleneck, plus the
stylized-fact statistics of its door-density series (and of any scalar
series you feed it)."""

from .config import SOCIAL_CUTOFF, SimConfig
from .dynamics import RunOutput, decision_check, desired_direction, run, sigmoid_F, step
from .errors import (
    ConfigError,
    DoorflowError,
    NumericBlowupError,
    PlacementError,
)
from .forces import ForceBreakdown, PairGeometry, total_forces
from .geometry import WorldGeometry
from .observables import DensityProbe, door_density, knn_density_at_point
from .regimes import RegimeClassification, SaturationThresholds, classify_regime
from .state import Agent, SimState, draw_body_params, initialize
from .stats import (
    SampledSeries,
    StatsReport,
    acf,
    dfa_hurst,
    excess_kurtosis,
    full_report,
    kde_at_zero,
    multifractal_slope,
    peak_scaling_exponent,
    returns,
    standardized_abs_returns,
)

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "ConfigError",
    "DensityProbe",
    "DoorflowError",
    "ForceBreakdown",
    "NumericBlowupError",
    "PairGeometry",
    "PlacementError",
    "RegimeClassification",
    "RunOutput",
    "SampledSeries",
    "SaturationThresholds",
    "SimConfig",
    "SimState",
    "SOCIAL_CUTOFF",
    "StatsReport",
    "WorldGeometry",
    "acf",
    "classify_regime",
    "decision_check",
    "desired_direction",
    "dfa_hurst",
    "door_density",
    "draw_body_params",
    "excess_kurtosis",
    "full_report",
    "initialize",
    "kde_at_zero",
    "knn_density_at_point",
    "multifractal_slope",
    "peak_scaling_exponent",
    "returns",
    "run",
    "sigmoid_F",
    "standardized_abs_returns",
    "step",
    "total_forces",
]
