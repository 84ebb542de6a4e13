"""Door-line density via the k-nearest-neighbor estimator.

The estimate at a point is (kappa - 1) / (pi * d_kappa^2) with d_kappa the
distance to the kappa-th nearest agent center; the door density averages the
estimate over three probe points on the door line at y = -L/4, 0, +L/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidentAgentsError, ConfigError, InsufficientPopulationError


@dataclass(frozen=True)
class DensityProbe:
    """Measurement points on the door line plus the neighbor count."""

    points: np.ndarray
    kappa: int = 8

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        object.__setattr__(self, "points", pts)
        if self.kappa < 2:
            raise ConfigError(f"kappa must be >= 2, got {self.kappa!r}")

    @classmethod
    def for_door(cls, door_width: float, kappa: int = 8) -> "DensityProbe":
        quarter = door_width / 4.0
        points = np.array([[0.0, -quarter], [0.0, 0.0], [0.0, quarter]])
        return cls(points=points, kappa=kappa)


def knn_density_at_point(point, positions, kappa: int) -> float:
    """Density estimate (persons/m^2) at one point from agent centers."""
    positions = np.asarray(positions, dtype=np.float64)
    n = positions.shape[0]
    if n < kappa:
        raise InsufficientPopulationError(
            f"need at least kappa={kappa} agents for the density estimate, have {n}"
        )
    point = np.asarray(point, dtype=np.float64)
    dist = np.hypot(positions[:, 0] - point[0], positions[:, 1] - point[1])
    d_k = float(np.partition(dist, kappa - 1)[kappa - 1])
    if d_k <= 0.0:
        raise CoincidentAgentsError(
            f"kappa-th nearest agent coincides with the probe point {point.tolist()}"
        )
    return (kappa - 1) / (math.pi * d_k * d_k)


def door_density(positions, probe: DensityProbe) -> float:
    """Mean of the point estimates over the probe's door-line points."""
    values = [knn_density_at_point(p, positions, probe.kappa) for p in probe.points]
    return float(np.mean(values))
