"""Time stepping, routing, reinsertion, the imitation decision rule, sampling.

The integration loop lives in the compiled kernel; this module owns the event
semantics. Each step is: integrate (semi-implicit Euler), then reinsertion of
agents that crossed their target plane, then decision checks for undecided
agents inside the decision area. Samples are taken on exact step boundaries,
the first one right at the end of the warmup stretch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .config import SimConfig
from .errors import NumericBlowupError
from .geometry import PLACEMENT_MARGIN, TARGET_X, WorldGeometry
from .observables import DensityProbe, door_density
from .state import STATE_A, STATE_B, SimState, initialize, place_agent
from .stats import SampledSeries

#: Any agent moving faster than this multiple of the largest desired speed
#: means the integration ran away; checked at every sample.
SPEED_CAP_FACTOR = 3.0


@dataclass
class RunOutput:
    """Sampled observables of one run plus the reinsertion/flip event log."""

    times: np.ndarray
    density: np.ndarray
    fraction: np.ndarray
    events: list = field(default_factory=list)

    @property
    def density_series(self) -> SampledSeries:
        return SampledSeries(values=self.density, label="rho")

    @property
    def fraction_series(self) -> SampledSeries:
        return SampledSeries(values=self.fraction, label="frac_a")

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("time_s,rho,frac_a\n")
            for t, rho, frac in zip(self.times, self.density, self.fraction):
                fh.write(f"{t!r},{rho!r},{frac!r}\n")

    def events_to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("time_s,agent_id,event\n")
            for t, agent_id, kind in self.events:
                fh.write(f"{t!r},{agent_id},{kind}\n")


def sigmoid_F(xi: float, temperature: float) -> float:
    """Keep-state probability of the decision rule; exactly 0.5 for T = inf."""
    if temperature is None:
        raise ValueError("decision sigmoid needs a temperature (config.T is absent)")
    if math.isinf(temperature):
        return 0.5
    z = (xi - 0.5) / temperature
    if z > 700.0:
        return 1.0
    if z < -700.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(-z))


def desired_direction_xy(x: float, y: float, group: int, radius: float,
                         geometry: WorldGeometry) -> np.ndarray:
    """Unit desired direction for one agent (numpy reference of the kernel)."""
    sign = 1.0 if group == STATE_A else -1.0
    crossed = x >= 0.0 if group == STATE_A else x <= 0.0
    if crossed:
        return np.array([sign, 0.0])
    margin = max(geometry.door_half - radius - PLACEMENT_MARGIN, 0.0)
    aim_y = min(max(y, -margin), margin)
    direction = np.array([-x, aim_y - y])
    norm = float(np.hypot(direction[0], direction[1]))
    if norm < 1e-12:
        return np.array([sign, 0.0])
    return direction / norm


def desired_direction(agent, geometry: WorldGeometry) -> np.ndarray:
    """Desired direction of an Agent record ('a' heads +x, 'b' heads -x)."""
    group = STATE_A if agent.state == "a" else STATE_B
    return desired_direction_xy(
        float(agent.position[0]), float(agent.position[1]), group, agent.radius, geometry
    )


def desired_direction_arrays(state: SimState, geometry: WorldGeometry) -> np.ndarray:
    """Desired directions for all agents, shape (N, 2)."""
    out = np.empty((state.n_agents, 2))
    for i in range(state.n_agents):
        out[i] = desired_direction_xy(
            state.pos[i, 0], state.pos[i, 1], int(state.state[i]), state.radius[i], geometry
        )
    return out


def check_reinsertion(state: SimState, config: SimConfig, geometry: WorldGeometry) -> list:
    """Teleport agents that crossed their target back to the start side.

    The new position is uniform in the reinsertion zone on the side opposite
    the agent's current desired direction; velocity resets to zero and the
    decision flag clears. Returns (time, agent_id, "reinserted") events.
    """
    events = []
    crossed = ((state.state == STATE_A) & (state.pos[:, 0] > TARGET_X)) | (
        (state.state == STATE_B) & (state.pos[:, 0] < -TARGET_X)
    )
    for i in np.nonzero(crossed)[0]:
        side = -1 if state.state[i] == STATE_A else 1
        place_agent(state, int(i), side, geometry, require_free=False)
        state.vel[i] = 0.0
        state.decided[i] = False
        events.append((state.time, int(i), "reinserted"))
    return events


def decision_check(state: SimState, config: SimConfig, geometry: WorldGeometry) -> list:
    """Evaluate the imitation rule for undecided agents inside the decision area.

    The same-state fraction is computed over everyone inside the area (the
    deciding agent included) from a snapshot taken before any flip in this
    batch; chi draws happen in ascending agent id order. Returns
    (time, agent_id, "state_flip") events.
    """
    in_area = geometry.in_decision_area(state.pos)
    pending = in_area & ~state.decided
    if not pending.any():
        return []
    n_in = int(in_area.sum())
    n_a_in = int((in_area & (state.state == STATE_A)).sum())
    events = []
    for i in np.nonzero(pending)[0]:
        same = n_a_in if state.state[i] == STATE_A else n_in - n_a_in
        xi = same / n_in
        chi = state.rng.uniform()
        if sigmoid_F(xi, config.T) < chi:
            state.state[i] = STATE_B if state.state[i] == STATE_A else STATE_A
            events.append((state.time, int(i), "state_flip"))
        state.decided[i] = True
    return events


def step(state: SimState, config: SimConfig, geometry: WorldGeometry | None = None) -> SimState:
    """Advance one dt: integrate, then reinsertion and decision checks."""
    if geometry is None:
        geometry = WorldGeometry(door_width=config.L)
    _, code, bad = _kernel.advance(state, config, geometry, 1, config.decisions_enabled)
    if code == _kernel.STOP_NONFINITE:
        raise NumericBlowupError(
            f"non-finite force on agent {bad} at t={state.time:.6f} s",
            time=state.time,
            agent_id=int(bad),
        )
    check_reinsertion(state, config, geometry)
    if config.decisions_enabled:
        decision_check(state, config, geometry)
    return state


def run(config: SimConfig, geometry: WorldGeometry | None = None) -> RunOutput:
    """Full seeded run: initialize, warm up, then record N_T samples."""
    if geometry is None:
        geometry = WorldGeometry(door_width=config.L)
    state = initialize(config, geometry)
    probe = DensityProbe.for_door(geometry.door_width, config.kappa)
    check_decisions = config.decisions_enabled
    speed_cap = SPEED_CAP_FACTOR * float(state.desired_speed.max())

    n_samples = config.N_T
    times = np.empty(n_samples)
    density = np.empty(n_samples)
    fraction = np.empty(n_samples)
    events: list = []

    remaining = config.warmup_steps
    recorded = 0
    while True:
        if remaining == 0:
            _record_sample(state, probe, speed_cap, times, density, fraction, recorded)
            recorded += 1
            if recorded == n_samples:
                break
            remaining = config.steps_per_sample
            continue
        steps, code, bad = _kernel.advance(state, config, geometry, remaining, check_decisions)
        remaining -= steps
        if code == _kernel.STOP_NONFINITE:
            raise NumericBlowupError(
                f"non-finite force on agent {bad} at t={state.time:.6f} s",
                time=state.time,
                agent_id=int(bad),
            )
        if code == _kernel.STOP_EVENT:
            events.extend(check_reinsertion(state, config, geometry))
            if check_decisions:
                events.extend(decision_check(state, config, geometry))

    return RunOutput(times=times, density=density, fraction=fraction, events=events)


def _record_sample(state, probe, speed_cap, times, density, fraction, idx) -> None:
    speeds = np.hypot(state.vel[:, 0], state.vel[:, 1])
    worst = int(np.argmax(speeds))
    if speeds[worst] >= speed_cap:
        raise NumericBlowupError(
            f"runaway speed {speeds[worst]:.2f} m/s on agent {worst} "
            f"at t={state.time:.6f} s",
            time=state.time,
            agent_id=worst,
        )
    times[idx] = state.time
    density[idx] = door_density(state.pos, probe)
    fraction[idx] = state.fraction_a
