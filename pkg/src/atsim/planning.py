"""Global A* path search over the occupancy grid and the local dynamic-window
velocity sampler."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .geometry import Pose2D, Twist
from .mapping import OccupancyGrid

UNKNOWN_COST = 2.0  # traversal multiplier for cells not yet observed

_NEIGHBORS = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]


class NoPathError(Exception):
    pass


def plan_global(grid: OccupancyGrid, start: tuple[float, float],
                goal: tuple[float, float], inflation_radius: float,
                occupied: np.ndarray | None = None) -> list[tuple[float, float]]:
    """8-connected A* from start to goal over the inflated grid.

    Steps cost their Euclidean length, doubled into unobserved cells, so the
    result matches a Dijkstra search with the same weights. Cells under the
    robot are treated as free: it is standing on them.
    """
    res = grid.resolution
    if occupied is None:
        occupied = grid.inflated_occupied(inflation_radius)
    unknown = grid.unknown_mask()
    six, siy = grid.cell_of(*start)
    gix, giy = grid.cell_of(*goal)
    if not (0 <= gix < grid.nx and 0 <= giy < grid.ny):
        raise NoPathError("goal outside the map")
    if occupied[giy, gix]:
        raise NoPathError("goal cell is occupied")
    occupied = occupied.copy()
    rc = int(math.ceil(inflation_radius / res))
    occupied[max(0, siy - rc):siy + rc + 1, max(0, six - rc):six + rc + 1] = False

    def h(ix, iy):
        return math.hypot(ix - gix, iy - giy) * res

    start_cell = (six, siy)
    goal_cell = (gix, giy)
    g = {start_cell: 0.0}
    came: dict[tuple[int, int], tuple[int, int]] = {}
    pq: list[tuple[float, int, tuple[int, int]]] = []
    tie = 0
    heapq.heappush(pq, (h(six, siy), tie, start_cell))
    closed = set()
    while pq:
        f, _, cell = heapq.heappop(pq)
        if cell in closed:
            continue
        if cell == goal_cell:
            break
        closed.add(cell)
        cx, cy = cell
        for dx, dy in _NEIGHBORS:
            nx_, ny_ = cx + dx, cy + dy
            if not (0 <= nx_ < grid.nx and 0 <= ny_ < grid.ny):
                continue
            if occupied[ny_, nx_]:
                continue
            mult = UNKNOWN_COST if unknown[ny_, nx_] else 1.0
            cost = g[cell] + math.hypot(dx, dy) * res * mult
            nxt = (nx_, ny_)
            if cost < g.get(nxt, math.inf):
                g[nxt] = cost
                came[nxt] = cell
                tie += 1
                heapq.heappush(pq, (cost + h(nx_, ny_), tie, nxt))
    if goal_cell not in g:
        raise NoPathError("no traversable route to the goal")
    cells = [goal_cell]
    while cells[-1] != start_cell:
        cells.append(came[cells[-1]])
    cells.reverse()
    pts = [grid.center_of(ix, iy) for ix, iy in cells]
    pts[-1] = (goal[0], goal[1])
    return pts


# ---- dynamic window ----------------------------------------------------------

@dataclass
class VelocityLimits:
    v_max: float = 0.5
    v_min: float = 0.0
    w_max: float = 1.0
    accel_v: float = 0.5
    accel_w: float = 1.5


# scoring weights: target heading dominates, clearance and speed break the rest
W_HEADING = 0.8
W_CLEARANCE = 0.1
W_VELOCITY = 0.1

V_SAMPLES = 11
W_SAMPLES = 21
HORIZON_T = 2.0      # seconds of arc rolled out per sample
CLEAR_CAP = 3.0      # clearance saturates at this arc length
_ARC_STEPS = 21


def dynamic_window(cur: Twist, lim: VelocityLimits, dt: float) -> tuple[float, float, float, float]:
    """Reachable velocity box around the current twist after one period."""
    vlo = max(lim.v_min, cur.v - lim.accel_v * dt)
    vhi = min(lim.v_max, cur.v + lim.accel_v * dt)
    wlo = max(-lim.w_max, cur.w - lim.accel_w * dt)
    whi = min(lim.w_max, cur.w + lim.accel_w * dt)
    return vlo, vhi, wlo, whi


def admissible(v: float, w: float, dist: float, lim: VelocityLimits) -> bool:
    """Can the pair stop within `dist` meters of free arc?"""
    if dist < 0.0:
        return False
    return (v <= math.sqrt(2.0 * dist * lim.accel_v) + 1e-12
            and abs(w) <= math.sqrt(2.0 * dist * lim.accel_w) + 1e-12)


@dataclass
class DwaDebug:
    window: tuple[float, float, float, float]
    chosen_v: float
    chosen_w: float
    chosen_dist: float
    any_admissible: bool


def dwa_step(pose: Pose2D, cur: Twist, target: tuple[float, float],
             occupied: np.ndarray, resolution: float, lim: VelocityLimits,
             dt: float, footprint_radius: float) -> tuple[Twist, bool, DwaDebug]:
    """One dynamic-window step toward a local target.

    Returns (twist, recovery, debug). `recovery` goes True when every sampled
    pair is inadmissible, in which case the twist is zero and the caller
    should replan.
    """
    vlo, vhi, wlo, whi = dynamic_window(cur, lim, dt)
    vs = np.linspace(vlo, vhi, V_SAMPLES)
    ws = np.linspace(wlo, whi, W_SAMPLES)
    v_g, w_g = np.meshgrid(vs, ws, indexing="ij")
    v_s = v_g.ravel()
    w_s = w_g.ravel()

    ts = np.linspace(0.0, HORIZON_T, _ARC_STEPS)
    th0 = pose.theta
    phi = th0 + w_s[:, None] * ts[None, :]
    small = np.abs(w_s) < 1e-9
    with np.errstate(divide="ignore", invalid="ignore"):
        rx = np.where(small[:, None], v_s[:, None] * math.cos(th0) * ts[None, :],
                      (v_s / np.where(small, 1.0, w_s))[:, None] * (np.sin(phi) - math.sin(th0)))
        ry = np.where(small[:, None], v_s[:, None] * math.sin(th0) * ts[None, :],
                      -(v_s / np.where(small, 1.0, w_s))[:, None] * (np.cos(phi) - math.cos(th0)))
    px = pose.x + rx
    py = pose.y + ry

    ny, nx = occupied.shape
    ix = np.floor(px / resolution).astype(np.int64)
    iy = np.floor(py / resolution).astype(np.int64)
    inside = (ix >= 0) & (ix < nx) & (iy >= 0) & (iy < ny)
    occ_hit = ~inside
    occ_hit[inside] = occupied[iy[inside], ix[inside]]
    # cells under the robot's own footprint never block the arc
    near = (px - pose.x) ** 2 + (py - pose.y) ** 2 <= footprint_radius ** 2
    occ_hit &= ~near

    any_hit = occ_hit.any(axis=1)
    first = np.where(any_hit, occ_hit.argmax(axis=1), _ARC_STEPS)
    t_free = np.where(first >= _ARC_STEPS, HORIZON_T, ts[np.minimum(first, _ARC_STEPS - 1)])
    dist = np.where(first >= _ARC_STEPS, CLEAR_CAP, v_s * t_free)
    dist = np.minimum(dist, CLEAR_CAP)
    # a blocked start (first == 0) leaves no room at all
    dist = np.where(first == 0, 0.0, dist)

    ok = ((v_s <= np.sqrt(2.0 * dist * lim.accel_v) + 1e-12)
          & (np.abs(w_s) <= np.sqrt(2.0 * dist * lim.accel_w) + 1e-12))

    dbg = DwaDebug((vlo, vhi, wlo, whi), 0.0, 0.0, 0.0, bool(ok.any()))
    if not ok.any():
        return Twist(), True, dbg

    # score at the pose reached after the horizon (or at the collision point)
    end_idx = np.minimum(np.where(first >= _ARC_STEPS, _ARC_STEPS - 1, first), _ARC_STEPS - 1)
    rows = np.arange(v_s.shape[0])
    ex = px[rows, end_idx]
    ey = py[rows, end_idx]
    eth = th0 + w_s * ts[end_idx]
    bearing = np.arctan2(target[1] - ey, target[0] - ex)
    d = bearing - eth
    herr = np.abs(np.arctan2(np.sin(d), np.cos(d)))
    heading = 1.0 - herr / math.pi
    clearance = dist / CLEAR_CAP
    velocity = v_s / lim.v_max if lim.v_max > 0 else np.zeros_like(v_s)
    g = W_HEADING * heading + W_CLEARANCE * clearance + W_VELOCITY * velocity
    g = np.where(ok, g, -np.inf)

    order = np.lexsort((rows, np.abs(w_s), -v_s, -g))
    best = order[0]
    tw = Twist(float(v_s[best]), 0.0, float(w_s[best]))
    dbg.chosen_v = tw.v
    dbg.chosen_w = tw.w
    dbg.chosen_dist = float(dist[best])
    return tw, False, dbg
