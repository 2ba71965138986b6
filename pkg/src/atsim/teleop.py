"""Scripted operator: a stand-in for a human steering the master robot with a
joystick toward a goal they can see, around obstacles they can see.

Pure pursuit with a reactive sidestep blended in from the scan. It cruises
faster than the autonomy profile and corrects late, which is the point: it
drives like a person, not like the planner.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Pose2D, Twist, wrap_angle
from .world import LaserScan


@dataclass
class TeleopParams:
    cruise: float = 0.45
    w_gain: float = 1.8
    w_max: float = 0.9
    avoid_range: float = 1.6   # begin steering around anything closer ahead
    hard_range: float = 0.4    # nearly stop at this clearance
    avoid_gain: float = 0.45
    turn_slow: float = 0.6     # heading error (rad) above which speed drops
    tolerance: float = 0.3
    goal_slow_radius: float = 1.2


class ScriptedTeleop:
    def __init__(self, goal: tuple[float, float], params: TeleopParams | None = None):
        self.goal = goal
        self.p = params or TeleopParams()
        self.done = False

    def step(self, pose: Pose2D, scan: LaserScan) -> tuple[Twist, bool]:
        """One steering decision. Returns (twist, goal_confirmed)."""
        p = self.p
        dx = self.goal[0] - pose.x
        dy = self.goal[1] - pose.y
        dist = math.hypot(dx, dy)
        if self.done or dist <= p.tolerance:
            self.done = True
            return Twist(), True

        err = wrap_angle(math.atan2(dy, dx) - pose.theta)
        w = max(-p.w_max, min(p.w_max, p.w_gain * err))
        v = p.cruise if abs(err) < p.turn_slow else 0.15

        b = scan.bearings()
        r = scan.ranges
        ahead = np.abs(b) <= 1.2
        near = ahead & (r < p.avoid_range)
        if np.any(near):
            left = near & (b > 0.0)
            right = near & (b <= 0.0)
            lmin = float(np.min(r[left])) if np.any(left) else p.avoid_range
            rmin = float(np.min(r[right])) if np.any(right) else p.avoid_range
            # push away from the closer side
            w += p.avoid_gain * (1.0 / rmin - 1.0 / lmin)
            w = max(-p.w_max, min(p.w_max, w))
            d_fwd = float(np.min(r[np.abs(b) <= 0.6])) if np.any(np.abs(b) <= 0.6) else p.avoid_range
            frac = (d_fwd - p.hard_range) / (p.avoid_range - p.hard_range)
            frac = max(0.0, min(frac, 1.0)) ** 1.5  # caution grows sharply up close
            v = min(v, p.cruise * max(0.2, frac))

        v = min(v, max(0.12, 0.9 * (dist - p.tolerance) + 0.12))
        if dist < p.goal_slow_radius:
            v = min(v, 0.3)
        return Twist(v=v, vy=0.0, w=w), False
