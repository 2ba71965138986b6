"""Autonomy node: incremental mapping, periodic global replans, and
dynamic-window following with a goal ritual.

On arrival inside the goal tolerance the robot performs one full in-place
turn (a final sweep of the surroundings) before declaring the goal reached.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Pose2D, Twist, wrap_angle
from .mapping import OccupancyGrid
from .planning import NoPathError, VelocityLimits, dwa_step, plan_global
from .world import LaserScan

MODE_PLANNING = "Planning"
MODE_FOLLOWING = "Following"
MODE_RECOVERY = "RecoveryRotation"
MODE_REACHED = "GoalReached"
MODE_FAILED = "Failed"

REPLAN_PERIOD = 2.0
GOAL_TOLERANCE = 0.3
RECOVERY_W = 0.5
LOOKAHEAD = 0.7
# covers cell quantization: with the hull at a free-cell edge and the
# obstacle at the far corner of its endpoint cell, clearance stays positive
INFLATION_MARGIN = 0.15
# consecutive all-inadmissible ticks before the node starts turning in place
_STUCK_TICKS = 5
# final-approach speed taper: commands may run a couple of control periods
# stale (remote computation), so creep into the goal circle instead of
# carrying full cruise speed across it
APPROACH_RADIUS = 1.2
APPROACH_GAIN = 0.9
APPROACH_V_FLOOR = 0.12


@dataclass
class NavState:
    goal: tuple[float, float]
    mode: str = MODE_PLANNING
    path: list = field(default_factory=list)
    last_plan_time: float = float("-inf")
    rotate_accum: float = 0.0
    last_theta: float | None = None
    stuck: int = 0


def goal_step(nav: NavState, pose: Pose2D, tolerance: float = GOAL_TOLERANCE) -> NavState:
    """Advance the arrival state machine for the current pose.

    Entering the tolerance circle switches to the recovery rotation; once a
    full turn has accumulated the mode latches to GoalReached.
    """
    if nav.mode in (MODE_REACHED, MODE_FAILED):
        return nav
    if nav.mode == MODE_RECOVERY:
        if nav.last_theta is not None:
            nav.rotate_accum += abs(wrap_angle(pose.theta - nav.last_theta))
        nav.last_theta = pose.theta
        if nav.rotate_accum >= 2.0 * math.pi - 1e-9:
            nav.mode = MODE_REACHED
        return nav
    err = math.hypot(nav.goal[0] - pose.x, nav.goal[1] - pose.y)
    if err <= tolerance:
        nav.mode = MODE_RECOVERY
        nav.rotate_accum = 0.0
        nav.last_theta = pose.theta
    return nav


class AutonomyNode:
    """Maps, plans, and drives one robot toward a goal in its world frame."""

    def __init__(self, width_m: float, height_m: float, goal: tuple[float, float],
                 footprint_radius: float, limits: VelocityLimits | None = None,
                 resolution: float = 0.1, tolerance: float = GOAL_TOLERANCE):
        self.grid = OccupancyGrid(width_m, height_m, resolution)
        self.limits = limits or VelocityLimits()
        self.footprint = footprint_radius
        self.inflation = footprint_radius + INFLATION_MARGIN
        self.tolerance = tolerance
        self.nav = NavState(goal=goal)
        self.cur = Twist()
        self.plans = 0
        self.dwa_steps = 0
        self.dwa_audit: list[tuple] = []
        self._occ = None

    @property
    def mode(self) -> str:
        return self.nav.mode

    def _replan(self, pose: Pose2D, now: float) -> None:
        self._occ = self.grid.inflated_occupied(self.inflation)
        self.nav.last_plan_time = now
        self.plans += 1
        try:
            self.nav.path = plan_global(self.grid, (pose.x, pose.y), self.nav.goal,
                                        self.inflation, occupied=self._occ)
            self.nav.mode = MODE_FOLLOWING
        except NoPathError:
            self.nav.path = []
            self.nav.mode = MODE_PLANNING

    def _local_target(self, pose: Pose2D) -> tuple[float, float]:
        path = self.nav.path
        if not path:
            return self.nav.goal
        pts = np.asarray(path)
        d = np.hypot(pts[:, 0] - pose.x, pts[:, 1] - pose.y)
        i = int(np.argmin(d))
        # walk ahead of the closest path point by the lookahead distance
        acc = 0.0
        j = i
        while j + 1 < len(path) and acc < LOOKAHEAD:
            acc += math.hypot(path[j + 1][0] - path[j][0], path[j + 1][1] - path[j][1])
            j += 1
        return path[j]

    def on_tick(self, now: float, pose: Pose2D, scan: LaserScan) -> Twist:
        self.grid.update(pose, scan)
        nav = goal_step(self.nav, pose, self.tolerance)

        if nav.mode == MODE_REACHED or nav.mode == MODE_FAILED:
            self.cur = Twist()
            return self.cur
        if nav.mode == MODE_RECOVERY:
            self.cur = Twist(0.0, 0.0, RECOVERY_W)
            return self.cur

        if (nav.mode == MODE_PLANNING or not nav.path
                or now - nav.last_plan_time >= REPLAN_PERIOD):
            self._replan(pose, now)
            if nav.mode == MODE_PLANNING:
                # nothing traversable yet; stay put and try again next tick
                self.cur = Twist()
                return self.cur
        else:
            # keep the obstacle view current between replans
            self._occ = self.grid.inflated_occupied(self.inflation)

        target = self._local_target(pose)
        tw, recovery, dbg = dwa_step(pose, self.cur, target, self._occ,
                                     self.grid.resolution, self.limits, 0.1,
                                     self.footprint)
        self.dwa_steps += 1
        self.dwa_audit.append((tw.v, tw.w, dbg.window, dbg.chosen_dist, recovery))
        if recovery:
            nav.stuck += 1
            nav.last_plan_time = float("-inf")  # force a replan next tick
            if nav.stuck >= _STUCK_TICKS:
                tw = Twist(0.0, 0.0, RECOVERY_W)
        else:
            nav.stuck = 0
            err = math.hypot(nav.goal[0] - pose.x, nav.goal[1] - pose.y)
            if err < APPROACH_RADIUS and tw.v > 0.0:
                cap = max(APPROACH_V_FLOOR,
                          APPROACH_GAIN * (err - self.tolerance))
                if tw.v > cap:
                    # scale the whole twist so the chosen arc is preserved
                    f = cap / tw.v
                    tw = Twist(cap, tw.vy * f, tw.w * f)
        self.cur = tw
        return tw
