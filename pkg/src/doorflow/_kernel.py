"""Compiled integration kernel: cell-grid forces + semi-implicit Euler loop.

The grid uses cells of size >= (social cutoff + max diameter) rebuilt every
step via counting sort, so every pair within the cutoff is found in the 3x3
cell neighborhood. Per-agent sums run in a fixed order (cells row-major,
ascending agent id inside a cell), which keeps reruns bit-identical.

``advance`` integrates until an event needs Python-side handling: an agent
crossing its target plane, an undecided agent inside the decision area
(decision mode only), or a non-finite force. Python applies the event with
the run's RNG and resumes, so the whole stream of random draws stays in one
numpy Generator.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .config import SOCIAL_CUTOFF
from .geometry import DECISION_HALF_DEPTH, PLACEMENT_MARGIN, TARGET_X

#: Bump when the compiled physics changes; keys cached acceptance runs.
PHYSICS_VERSION = "doorflow-physics-1"

STOP_DONE = 0
STOP_EVENT = 1
STOP_NONFINITE = 2


@njit(cache=True)
def _desired_dir(x, y, group, radius, door_half):
    """Unit desired direction; aims at the door opening until it is crossed."""
    if group == 0:  # a travels +x
        if x >= 0.0:
            return 1.0, 0.0
        sign = 1.0
    else:           # b travels -x
        if x <= 0.0:
            return -1.0, 0.0
        sign = -1.0
    margin = door_half - radius - PLACEMENT_MARGIN
    if margin < 0.0:
        margin = 0.0
    aim_y = y
    if aim_y > margin:
        aim_y = margin
    elif aim_y < -margin:
        aim_y = -margin
    dx = -x
    dy = aim_y - y
    norm = np.sqrt(dx * dx + dy * dy)
    if norm < 1e-12:
        return sign, 0.0
    return dx / norm, dy / norm


@njit(cache=True)
def _point_seg(px, py, ax, ay, bx, by):
    """Distance from (px,py) to the segment and unit normal toward the point."""
    ux = bx - ax
    uy = by - ay
    seg_len2 = ux * ux + uy * uy
    if seg_len2 > 0.0:
        t = ((px - ax) * ux + (py - ay) * uy) / seg_len2
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    else:
        t = 0.0
    cx = ax + t * ux
    cy = ay + t * uy
    dx = px - cx
    dy = py - cy
    dist = np.sqrt(dx * dx + dy * dy)
    if dist > 1e-12:
        return dist, dx / dist, dy / dist
    return 0.0, 1.0, 0.0


@njit(cache=True)
def _build_grid(pos, x0, y0, cell_size, ncx, ncy, agent_cell, cell_count, cell_start, cell_items, cursor):
    n = pos.shape[0]
    ncells = ncx * ncy
    for c in range(ncells):
        cell_count[c] = 0
    for i in range(n):
        cx = int((pos[i, 0] - x0) / cell_size)
        cy = int((pos[i, 1] - y0) / cell_size)
        if cx < 0:
            cx = 0
        elif cx >= ncx:
            cx = ncx - 1
        if cy < 0:
            cy = 0
        elif cy >= ncy:
            cy = ncy - 1
        cid = cx * ncy + cy
        agent_cell[i] = cid
        cell_count[cid] += 1
    cell_start[0] = 0
    for c in range(ncells):
        cell_start[c + 1] = cell_start[c] + cell_count[c]
        cursor[c] = cell_start[c]
    for i in range(n):
        cid = agent_cell[i]
        cell_items[cursor[cid]] = i
        cursor[cid] += 1


@njit(cache=True)
def _fill_forces(
    pos, vel, radius, mass, vdes, group,
    walls, door_half,
    amp, decay, d_switch, cutoff, k_n, k_t, tau,
    x0, y0, cell_size, ncx, ncy,
    agent_cell, cell_count, cell_start, cell_items, cursor,
    f_drive, f_social, f_contact, f_wall,
):
    n = pos.shape[0]
    _build_grid(pos, x0, y0, cell_size, ncx, ncy, agent_cell, cell_count, cell_start, cell_items, cursor)
    n_walls = walls.shape[0]
    for i in range(n):
        ex, ey = _desired_dir(pos[i, 0], pos[i, 1], group[i], radius[i], door_half)
        f_drive[i, 0] = mass[i] * (vdes[i] * ex - vel[i, 0]) / tau
        f_drive[i, 1] = mass[i] * (vdes[i] * ey - vel[i, 1]) / tau

        fsx = 0.0
        fsy = 0.0
        fcx = 0.0
        fcy = 0.0
        cid = agent_cell[i]
        ccx = cid // ncy
        ccy = cid % ncy
        for ox in range(-1, 2):
            gx = ccx + ox
            if gx < 0 or gx >= ncx:
                continue
            for oy in range(-1, 2):
                gy = ccy + oy
                if gy < 0 or gy >= ncy:
                    continue
                c = gx * ncy + gy
                for idx in range(cell_start[c], cell_start[c + 1]):
                    j = cell_items[idx]
                    if j == i:
                        continue
                    dx = pos[i, 0] - pos[j, 0]
                    dy = pos[i, 1] - pos[j, 1]
                    dist = np.sqrt(dx * dx + dy * dy)
                    d = dist - radius[i] - radius[j]
                    if d > cutoff:
                        continue
                    if dist > 1e-12:
                        nx = dx / dist
                        ny = dy / dist
                    else:
                        nx = 1.0
                        ny = 0.0
                    a = amp if d <= d_switch else -amp
                    w = a * np.exp(-d / decay)
                    fsx += w * nx
                    fsy += w * ny
                    if d < 0.0:
                        overlap = -d
                        tx = -ny
                        ty = nx
                        dvt = (vel[j, 0] - vel[i, 0]) * tx + (vel[j, 1] - vel[i, 1]) * ty
                        fcx += k_n * overlap * nx + k_t * overlap * dvt * tx
                        fcy += k_n * overlap * ny + k_t * overlap * dvt * ty
        f_social[i, 0] = fsx
        f_social[i, 1] = fsy
        f_contact[i, 0] = fcx
        f_contact[i, 1] = fcy

        fwx = 0.0
        fwy = 0.0
        for s in range(n_walls):
            dist, nx, ny = _point_seg(
                pos[i, 0], pos[i, 1], walls[s, 0], walls[s, 1], walls[s, 2], walls[s, 3]
            )
            d = dist - radius[i]
            if d > cutoff:
                continue
            w = amp * np.exp(-d / decay)
            fwx += w * nx
            fwy += w * ny
            if d < 0.0:
                overlap = -d
                tx = -ny
                ty = nx
                dvt = -(vel[i, 0] * tx + vel[i, 1] * ty)
                fwx += k_n * overlap * nx + k_t * overlap * dvt * tx
                fwy += k_n * overlap * ny + k_t * overlap * dvt * ty
        f_wall[i, 0] = fwx
        f_wall[i, 1] = fwy


@njit(cache=True)
def _advance(
    pos, vel, radius, mass, vdes, group, decided,
    n_steps, dt,
    walls, door_half, target_x, check_decisions, decision_half_depth,
    amp, decay, d_switch, cutoff, k_n, k_t, tau,
    x0, y0, cell_size, ncx, ncy,
):
    n = pos.shape[0]
    ncells = ncx * ncy
    agent_cell = np.empty(n, dtype=np.int64)
    cell_count = np.empty(ncells, dtype=np.int64)
    cell_start = np.empty(ncells + 1, dtype=np.int64)
    cell_items = np.empty(n, dtype=np.int64)
    cursor = np.empty(ncells, dtype=np.int64)
    f_drive = np.empty((n, 2))
    f_social = np.empty((n, 2))
    f_contact = np.empty((n, 2))
    f_wall = np.empty((n, 2))

    for s in range(n_steps):
        _fill_forces(
            pos, vel, radius, mass, vdes, group,
            walls, door_half,
            amp, decay, d_switch, cutoff, k_n, k_t, tau,
            x0, y0, cell_size, ncx, ncy,
            agent_cell, cell_count, cell_start, cell_items, cursor,
            f_drive, f_social, f_contact, f_wall,
        )
        for i in range(n):
            fx = f_drive[i, 0] + f_social[i, 0] + f_contact[i, 0] + f_wall[i, 0]
            fy = f_drive[i, 1] + f_social[i, 1] + f_contact[i, 1] + f_wall[i, 1]
            if not (np.isfinite(fx) and np.isfinite(fy)):
                return s, STOP_NONFINITE, i
            vel[i, 0] += fx / mass[i] * dt
            vel[i, 1] += fy / mass[i] * dt
            pos[i, 0] += vel[i, 0] * dt
            pos[i, 1] += vel[i, 1] * dt

        event = False
        for i in range(n):
            if group[i] == 0:
                if pos[i, 0] > target_x:
                    event = True
                    break
            else:
                if pos[i, 0] < -target_x:
                    event = True
                    break
        if not event and check_decisions:
            for i in range(n):
                if not decided[i]:
                    if abs(pos[i, 0]) <= decision_half_depth and abs(pos[i, 1]) <= door_half:
                        event = True
                        break
        if event:
            return s + 1, STOP_EVENT, -1
    return n_steps, STOP_DONE, -1


def _grid_params(geometry, radius):
    """Cell size and grid extents covering the corridor plus margin."""
    cell = SOCIAL_CUTOFF + 2.0 * float(np.max(radius)) + 1e-9
    x0 = -(geometry.half_length + 2.0)
    y0 = -(geometry.half_width + 2.0)
    ncx = int(np.ceil(2.0 * (geometry.half_length + 2.0) / cell))
    ncy = int(np.ceil(2.0 * (geometry.half_width + 2.0) / cell))
    return x0, y0, cell, max(ncx, 1), max(ncy, 1)


def force_components(state, config, geometry):
    """Driving, social, contact and wall force arrays via the grid path."""
    n = state.n_agents
    x0, y0, cell, ncx, ncy = _grid_params(geometry, state.radius)
    ncells = ncx * ncy
    f_drive = np.empty((n, 2))
    f_social = np.empty((n, 2))
    f_contact = np.empty((n, 2))
    f_wall = np.empty((n, 2))
    _fill_forces(
        state.pos, state.vel, state.radius, state.mass, state.desired_speed, state.state,
        geometry.wall_segments(), geometry.door_half,
        config.A0, config.B, config.d_sw, SOCIAL_CUTOFF, config.k_n, config.k_t, config.tau,
        x0, y0, cell, ncx, ncy,
        np.empty(n, dtype=np.int64), np.empty(ncells, dtype=np.int64),
        np.empty(ncells + 1, dtype=np.int64), np.empty(n, dtype=np.int64),
        np.empty(ncells, dtype=np.int64),
        f_drive, f_social, f_contact, f_wall,
    )
    return f_drive, f_social, f_contact, f_wall


def advance(state, config, geometry, n_steps: int, check_decisions: bool):
    """Integrate up to n_steps; stop early on any event. Returns
    (steps_done, stop_code, bad_agent)."""
    x0, y0, cell, ncx, ncy = _grid_params(geometry, state.radius)
    steps, code, bad = _advance(
        state.pos, state.vel, state.radius, state.mass, state.desired_speed,
        state.state, state.decided,
        n_steps, config.dt,
        geometry.wall_segments(), geometry.door_half, TARGET_X,
        check_decisions, DECISION_HALF_DEPTH,
        config.A0, config.B, config.d_sw, SOCIAL_CUTOFF,
        config.k_n, config.k_t, config.tau,
        x0, y0, cell, ncx, ncy,
    )
    state.step_count += steps
    state.time = state.step_count * config.dt
    return steps, code, bad
