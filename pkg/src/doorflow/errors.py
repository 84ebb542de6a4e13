"""Exception hierarchy shared across the package.

The CLI maps ConfigError to exit code 1 (usage/config) and every other
DoorflowError to exit code 2 (runtime/numeric).
"""


class DoorflowError(Exception):
    """Base class for all doorflow errors."""


class ConfigError(DoorflowError):
    """Invalid configuration value or malformed config file."""


class PlacementError(DoorflowError):
    """Non-overlapping placement could not be found (configuration too dense)."""


class NumericBlowupError(DoorflowError):
    """Integration produced a non-finite force or a runaway velocity."""

    def __init__(self, message: str, time: float, agent_id: int):
        super().__init__(message)
        self.time = time
        self.agent_id = agent_id


class InsufficientPopulationError(DoorflowError):
    """Fewer agents than the neighbor count requested by the density estimator."""


class CoincidentAgentsError(DoorflowError):
    """Density undefined: the k-th nearest agent sits exactly on the probe point."""


class DegenerateSeriesError(DoorflowError):
    """Series has zero variance (or all-zero returns) where a spread is required."""


class SeriesTooShortError(DoorflowError):
    """Series is shorter than the statistic's minimum length."""


class IngestError(DoorflowError):
    """CSV ingestion failed (missing column, non-numeric cell, bad transform)."""
