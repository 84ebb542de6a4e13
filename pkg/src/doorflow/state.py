"""Agents and mutable simulation state.

The hot loop works on struct-of-arrays storage (positions, velocities, body
parameters); ``SimState.agents`` materializes per-agent records for
inspection and tests. Body parameters are drawn uniformly from
mass [70, 90] kg, diameter [0.44, 0.56] m, desired speed [1.05, 1.35] m/s.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SimConfig
from .errors import PlacementError
from .geometry import PLACEMENT_MARGIN, REINSERT_X_MIN, TARGET_X, WorldGeometry

STATE_A = 0  # desires +x travel
STATE_B = 1  # desires -x travel
STATE_NAMES = {STATE_A: "a", STATE_B: "b"}

MASS_RANGE = (70.0, 90.0)
DIAMETER_RANGE = (0.44, 0.56)
DESIRED_SPEED_RANGE = (1.05, 1.35)

MAX_PLACEMENT_ATTEMPTS = 10_000


@dataclass
class Agent:
    """Read-only snapshot of one disc agent."""

    id: int
    position: np.ndarray
    velocity: np.ndarray
    radius: float
    mass: float
    desired_speed: float
    state: str                 # 'a' or 'b'
    decided_this_cycle: bool


class SimState:
    """Positions, velocities, body parameters and group state of all agents."""

    def __init__(self, n_agents: int, rng: np.random.Generator):
        self.time = 0.0
        self.step_count = 0
        self.rng = rng
        self.pos = np.zeros((n_agents, 2))
        self.vel = np.zeros((n_agents, 2))
        self.radius = np.zeros(n_agents)
        self.mass = np.zeros(n_agents)
        self.desired_speed = np.zeros(n_agents)
        self.state = np.zeros(n_agents, dtype=np.int8)
        self.decided = np.zeros(n_agents, dtype=np.bool_)

    @property
    def n_agents(self) -> int:
        return self.pos.shape[0]

    @property
    def n_a(self) -> int:
        return int(np.count_nonzero(self.state == STATE_A))

    @property
    def fraction_a(self) -> float:
        return self.n_a / self.n_agents

    @property
    def agents(self) -> list[Agent]:
        return [
            Agent(
                id=i,
                position=self.pos[i].copy(),
                velocity=self.vel[i].copy(),
                radius=float(self.radius[i]),
                mass=float(self.mass[i]),
                desired_speed=float(self.desired_speed[i]),
                state=STATE_NAMES[int(self.state[i])],
                decided_this_cycle=bool(self.decided[i]),
            )
            for i in range(self.n_agents)
        ]

    def snapshot(self) -> dict:
        """Copies of all arrays, for determinism comparisons."""
        return {
            "time": self.time,
            "pos": self.pos.copy(),
            "vel": self.vel.copy(),
            "radius": self.radius.copy(),
            "mass": self.mass.copy(),
            "desired_speed": self.desired_speed.copy(),
            "state": self.state.copy(),
            "decided": self.decided.copy(),
        }


def draw_body_params(rng: np.random.Generator) -> tuple[float, float, float]:
    """Draw (mass, radius, desired_speed), each uniform and independent."""
    mass = rng.uniform(*MASS_RANGE)
    radius = rng.uniform(*DIAMETER_RANGE) / 2.0
    desired_speed = rng.uniform(*DESIRED_SPEED_RANGE)
    return mass, radius, desired_speed


def place_agent(
    state: SimState,
    agent_id: int,
    side: int,
    geometry: WorldGeometry,
    exclude: int | None = None,
    require_free: bool = True,
) -> bool:
    """Draw a uniform position in the reinsertion zone of ``side`` for one agent.

    side = -1 places at x in [-10, -0.5], side = +1 at [0.5, 10]. Rejects
    positions overlapping any other disc; after MAX_PLACEMENT_ATTEMPTS either
    raises (require_free) or accepts the least-overlapping attempt seen.
    Returns True when the final position is overlap-free.
    """
    rng = state.rng
    radius = state.radius[agent_id]
    y_lim = geometry.half_width - radius - PLACEMENT_MARGIN
    others = np.ones(state.n_agents, dtype=bool)
    others[agent_id] = False
    if exclude is not None:
        others[exclude] = False
    # Only consider agents that already have a body (radius > 0).
    others &= state.radius > 0
    other_pos = state.pos[others]
    other_r = state.radius[others]

    best_pos = None
    best_penetration = np.inf
    for _ in range(MAX_PLACEMENT_ATTEMPTS):
        x = rng.uniform(REINSERT_X_MIN, TARGET_X) * side
        y = rng.uniform(-y_lim, y_lim)
        if other_pos.shape[0] == 0:
            state.pos[agent_id] = (x, y)
            return True
        gaps = np.hypot(other_pos[:, 0] - x, other_pos[:, 1] - y) - (other_r + radius)
        worst = -float(gaps.min())
        if worst <= 0.0:
            state.pos[agent_id] = (x, y)
            return True
        if worst < best_penetration:
            best_penetration = worst
            best_pos = (x, y)
    if require_free:
        raise PlacementError(
            f"could not place agent {agent_id} without overlap after "
            f"{MAX_PLACEMENT_ATTEMPTS} attempts (configuration too dense)"
        )
    state.pos[agent_id] = best_pos
    return False


def initialize(config: SimConfig, geometry: WorldGeometry | None = None) -> SimState:
    """Build the initial state: N_p/2 agents per side, at rest, no overlaps."""
    if geometry is None:
        geometry = WorldGeometry(door_width=config.L)
    rng = np.random.default_rng(config.seed)
    state = SimState(config.N_p, rng)
    half = config.N_p // 2
    for i in range(config.N_p):
        group = STATE_A if i < half else STATE_B
        state.state[i] = group
        mass, radius, speed = draw_body_params(rng)
        state.mass[i] = mass
        state.radius[i] = radius
        state.desired_speed[i] = speed
        side = -1 if group == STATE_A else 1
        place_agent(state, i, side, geometry, require_free=True)
    return state
