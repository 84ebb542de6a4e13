"""The three forces acting on each agent: driving, social, contact (+ walls).

The per-pair functions below are the readable reference used by tests and by
the brute-force O(N^2) oracle; the production path (``method="grid"``) runs
the compiled cell-grid kernel. Both must agree to 1e-9 N per component.

Sign conventions: the pair normal e_n points from j to i, so a positive
amplitude pushes i away from j. The social amplitude is +2000 N (repulsive)
for edge distances up to 0.15 m inclusive and -2000 N (attractive) beyond,
falling exponentially with decay length 0.08 m and truncated at 0.8 m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import SOCIAL_CUTOFF, SimConfig
from .errors import NumericBlowupError
from .geometry import WorldGeometry, point_segment_distance


@dataclass
class PairGeometry:
    """Edge-to-edge distance and unit normal (from j to i) of one pair."""

    d_edge: float
    e_n: np.ndarray

    @property
    def e_t(self) -> np.ndarray:
        return np.array([-self.e_n[1], self.e_n[0]])


@dataclass
class ForceBreakdown:
    """Per-agent decomposition of the total force."""

    driving: np.ndarray
    social: np.ndarray
    contact: np.ndarray
    wall: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.driving + self.social + self.contact + self.wall


def pair_geometry(pos_i, pos_j, r_i: float, r_j: float) -> PairGeometry:
    """Build PairGeometry for agents i and j; coincident centers fall back to +x."""
    diff = np.asarray(pos_i, dtype=float) - np.asarray(pos_j, dtype=float)
    dist = float(np.hypot(diff[0], diff[1]))
    if dist > 1e-12:
        e_n = diff / dist
    else:
        e_n = np.array([1.0, 0.0])
    return PairGeometry(d_edge=dist - r_i - r_j, e_n=e_n)


def driving_force(mass, desired_speed, velocity, e_desired, tau: float = 0.5) -> np.ndarray:
    """Self-propulsion: m (v_d e_d - v) / tau."""
    velocity = np.asarray(velocity, dtype=float)
    e_desired = np.asarray(e_desired, dtype=float)
    return mass * (desired_speed * e_desired - velocity) / tau


def social_force_pair(
    pair: PairGeometry,
    amplitude: float = 2000.0,
    decay_length: float = 0.08,
    switch_distance: float = 0.15,
    cutoff: float = SOCIAL_CUTOFF,
) -> np.ndarray:
    """Short-range repulsion, mid-range attraction, zero beyond the cutoff."""
    d = pair.d_edge
    if d > cutoff:
        return np.zeros(2)
    a = amplitude if d <= switch_distance else -amplitude
    return a * math.exp(-d / decay_length) * pair.e_n


def contact_force_pair(
    pair: PairGeometry,
    dv,
    k_n: float = 1.2e5,
    k_t: float = 2.4e5,
) -> np.ndarray:
    """Compression + sliding friction, active only while the discs overlap.

    ``dv`` is the velocity of j relative to i (v_j - v_i).
    """
    if pair.d_edge >= 0.0:
        return np.zeros(2)
    overlap = -pair.d_edge
    e_t = pair.e_t
    dv = np.asarray(dv, dtype=float)
    tangential_speed = float(dv @ e_t)
    return k_n * overlap * pair.e_n + k_t * overlap * tangential_speed * e_t


def wall_force(
    position,
    velocity,
    radius: float,
    segment,
    amplitude: float = 2000.0,
    decay_length: float = 0.08,
    cutoff: float = SOCIAL_CUTOFF,
    k_n: float = 1.2e5,
    k_t: float = 2.4e5,
) -> np.ndarray:
    """Wall interaction: always-repulsive social part plus contact when pressed in."""
    dist, normal = point_segment_distance(position, segment)
    d = dist - radius
    if d > cutoff:
        return np.zeros(2)
    force = amplitude * math.exp(-d / decay_length) * normal
    if d < 0.0:
        overlap = -d
        e_t = np.array([-normal[1], normal[0]])
        tangential_speed = float(-(np.asarray(velocity, dtype=float) @ e_t))
        force = force + k_n * overlap * normal + k_t * overlap * tangential_speed * e_t
    return force


def brute_force_breakdown(state, config: SimConfig, geometry: WorldGeometry) -> list[ForceBreakdown]:
    """O(N^2) oracle: sums the per-pair reference functions over all pairs."""
    from .dynamics import desired_direction_arrays  # local import, avoids a cycle

    n = state.n_agents
    walls = geometry.wall_segments()
    e_des = desired_direction_arrays(state, geometry)
    out = []
    for i in range(n):
        drive = driving_force(
            state.mass[i], state.desired_speed[i], state.vel[i], e_des[i], config.tau
        )
        social = np.zeros(2)
        contact = np.zeros(2)
        for j in range(n):
            if j == i:
                continue
            pair = pair_geometry(state.pos[i], state.pos[j], state.radius[i], state.radius[j])
            social += social_force_pair(
                pair, config.A0, config.B, config.d_sw, SOCIAL_CUTOFF
            )
            contact += contact_force_pair(
                pair, state.vel[j] - state.vel[i], config.k_n, config.k_t
            )
        wall = np.zeros(2)
        for seg in walls:
            wall += wall_force(
                state.pos[i],
                state.vel[i],
                state.radius[i],
                seg,
                config.A0,
                config.B,
                SOCIAL_CUTOFF,
                config.k_n,
                config.k_t,
            )
        out.append(ForceBreakdown(driving=drive, social=social, contact=contact, wall=wall))
    return out


def total_forces(
    state,
    config: SimConfig,
    geometry: WorldGeometry,
    method: str = "grid",
) -> list[ForceBreakdown]:
    """Per-agent force breakdowns for the whole state.

    method="grid" runs the compiled cell-grid path used by the integrator;
    method="brute" runs the independent O(N^2) oracle.
    """
    if method == "brute":
        breakdowns = brute_force_breakdown(state, config, geometry)
    elif method == "grid":
        from . import _kernel

        drive, social, contact, wall = _kernel.force_components(state, config, geometry)
        breakdowns = [
            ForceBreakdown(driving=drive[i], social=social[i], contact=contact[i], wall=wall[i])
            for i in range(state.n_agents)
        ]
    else:
        raise ValueError(f"unknown force method {method!r}")

    for i, fb in enumerate(breakdowns):
        if not np.all(np.isfinite(fb.total)):
            raise NumericBlowupError(
                f"non-finite force on agent {i} at t={state.time:.6f} s",
                time=state.time,
                agent_id=i,
            )
    return breakdowns
