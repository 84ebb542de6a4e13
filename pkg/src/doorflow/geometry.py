"""World layout: two corridors joined by a door, plus the decision area.

Frame convention: the door wall lies on x = 0 with the opening centered on
y = 0; group-a agents travel toward +x, group-b toward -x. Walls are
zero-thickness segments; an agent's wall clearance is the point-to-segment
distance minus its radius.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

#: Target planes sit this far from the door on each side.
TARGET_X = 10.0
#: Reinsertion zone along x on the start side: |x| in [REINSERT_X_MIN, TARGET_X].
REINSERT_X_MIN = 0.5
#: Decision area extends this far to each side of the door plane.
DECISION_HALF_DEPTH = 0.5
#: Clearance kept from walls when placing agents and when aiming at the door.
PLACEMENT_MARGIN = 0.1


@dataclass(frozen=True)
class WorldGeometry:
    """Corridor walls, door opening, decision area and targets."""

    door_width: float
    width: float = 20.0        # corridor width W
    half_length: float = 15.0  # corridor half-length X

    def __post_init__(self):
        if not self.door_width > 0:
            raise ConfigError(f"door width must be positive, got {self.door_width!r}")
        if not self.door_width < self.width:
            raise ConfigError(
                f"door width must be smaller than the corridor width "
                f"({self.door_width!r} >= {self.width!r})"
            )
        if not self.half_length > TARGET_X:
            raise ConfigError(
                f"corridor half-length must exceed the target distance "
                f"{TARGET_X}, got {self.half_length!r}"
            )

    @property
    def half_width(self) -> float:
        return self.width / 2.0

    @property
    def door_half(self) -> float:
        return self.door_width / 2.0

    def wall_segments(self) -> np.ndarray:
        """Return the four wall segments as rows of (x0, y0, x1, y1)."""
        w2 = self.half_width
        d2 = self.door_half
        x = self.half_length
        return np.array(
            [
                [0.0, -w2, 0.0, -d2],   # lower door jamb
                [0.0, d2, 0.0, w2],     # upper door jamb
                [-x, -w2, x, -w2],      # bottom side wall
                [-x, w2, x, w2],        # top side wall
            ],
            dtype=np.float64,
        )

    def in_decision_area(self, positions: np.ndarray) -> np.ndarray:
        """Boolean mask of positions inside the L x 1 m area around the door."""
        pos = np.atleast_2d(np.asarray(positions, dtype=np.float64))
        return (np.abs(pos[:, 0]) <= DECISION_HALF_DEPTH) & (
            np.abs(pos[:, 1]) <= self.door_half
        )

    def target_plane(self, state: int) -> float:
        """x coordinate of the target plane for state 0 (a, +x) or 1 (b, -x)."""
        return TARGET_X if state == 0 else -TARGET_X


def point_segment_distance(point, seg):
    """Distance from ``point`` to segment (x0,y0,x1,y1) and the unit normal
    pointing from the closest segment point toward ``point``.

    Degenerate case (point exactly on the segment) falls back to the +x
    normal so callers never see a zero-length direction.
    """
    px, py = float(point[0]), float(point[1])
    ax, ay, bx, by = (float(v) for v in seg)
    ux, uy = bx - ax, by - ay
    seg_len2 = ux * ux + uy * uy
    if seg_len2 > 0.0:
        t = ((px - ax) * ux + (py - ay) * uy) / seg_len2
        t = min(1.0, max(0.0, t))
    else:
        t = 0.0
    cx, cy = ax + t * ux, ay + t * uy
    dx, dy = px - cx, py - cy
    dist = (dx * dx + dy * dy) ** 0.5
    if dist > 1e-12:
        return dist, np.array([dx / dist, dy / dist])
    return 0.0, np.array([1.0, 0.0])
