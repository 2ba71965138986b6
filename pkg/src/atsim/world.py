"""World model: rectangular rooms with static and roaming obstacles, an exact
ray-cast range sensor, and collision-checked pose integration.

Ranges come from continuous segment/circle intersections rather than a
rasterized map, so a given pose and obstacle set always produces bit-identical
scans.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .geometry import (Circle, Pose2D, Rect, Twist, disc_circle_collides,
                       disc_rect_collides, ray_box_exit, ray_circle_hits,
                       ray_rect_hits)
from .kinematics import integrate_omni, integrate_unicycle


@dataclass
class LaserScan:
    angle_min: float
    angle_increment: float
    range_max: float
    ranges: np.ndarray
    stamp: float = 0.0

    def bearings(self) -> np.ndarray:
        n = self.ranges.shape[0]
        return self.angle_min + self.angle_increment * np.arange(n)


@dataclass
class MovingBox:
    """Axis-aligned box whose center performs a seeded random-waypoint walk.

    The center position is a pure function of (waypoint_seed, time): querying
    the same instant twice, in any order, gives the same point, and the
    center never leaves `bounds`.
    """
    width: float
    height: float
    speed: float
    waypoint_seed: int
    bounds: Rect
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def _extend_to(self, dist: float) -> None:
        c = self._cache
        if not c:
            c["rng"] = random.Random(self.waypoint_seed)
            c["pts"] = [(self.bounds.cx, self.bounds.cy)]
            c["cum"] = [0.0]
        rng, pts, cum = c["rng"], c["pts"], c["cum"]
        while cum[-1] <= dist:
            nx = rng.uniform(self.bounds.x, self.bounds.x + self.bounds.w)
            ny = rng.uniform(self.bounds.y, self.bounds.y + self.bounds.h)
            px, py = pts[-1]
            seg = math.hypot(nx - px, ny - py)
            if seg < 1e-9:
                continue
            pts.append((nx, ny))
            cum.append(cum[-1] + seg)

    def center_at(self, t: float) -> tuple[float, float]:
        dist = self.speed * max(t, 0.0)
        self._extend_to(dist)
        pts, cum = self._cache["pts"], self._cache["cum"]
        # walk the polyline to the segment containing `dist`
        import bisect
        i = bisect.bisect_right(cum, dist) - 1
        if i >= len(pts) - 1:
            return pts[-1]
        (x0, y0), (x1, y1) = pts[i], pts[i + 1]
        f = (dist - cum[i]) / (cum[i + 1] - cum[i])
        return (x0 + f * (x1 - x0), y0 + f * (y1 - y0))

    def rect_at(self, t: float) -> Rect:
        cx, cy = self.center_at(t)
        return Rect(cx - 0.5 * self.width, cy - 0.5 * self.height,
                    self.width, self.height)


@dataclass
class WorldSpec:
    width: float = 17.0
    height: float = 8.0
    robot_footprint_radius: float = 0.3
    robot_kind: str = "diff"  # or "omni"
    start_pose: Pose2D = field(default_factory=lambda: Pose2D(1.5, 4.0, 0.0))
    static_obstacles: list = field(default_factory=list)
    dynamic_obstacles: list[MovingBox] = field(default_factory=list)
    # actuator ceilings; planners apply their own tighter profiles
    v_limit: float = 1.0
    vy_limit: float = 1.0
    w_limit: float = 2.0

    def to_dict(self) -> dict:
        obs = []
        for o in self.static_obstacles:
            if isinstance(o, Circle):
                obs.append({"type": "circle", "cx": o.cx, "cy": o.cy, "r": o.r})
            else:
                obs.append({"type": "rect", "x": o.x, "y": o.y, "w": o.w, "h": o.h})
        dyn = [{
            "width": b.width, "height": b.height, "speed": b.speed,
            "waypoint_seed": b.waypoint_seed,
            "bounds": {"x": b.bounds.x, "y": b.bounds.y,
                       "w": b.bounds.w, "h": b.bounds.h},
        } for b in self.dynamic_obstacles]
        return {
            "width": self.width, "height": self.height,
            "robot_footprint_radius": self.robot_footprint_radius,
            "robot_kind": self.robot_kind,
            "start_pose": {"x": self.start_pose.x, "y": self.start_pose.y,
                           "theta": self.start_pose.theta},
            "static_obstacles": obs,
            "dynamic_obstacles": dyn,
            "v_limit": self.v_limit, "vy_limit": self.vy_limit,
            "w_limit": self.w_limit,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WorldSpec":
        statics = []
        for o in d.get("static_obstacles", []):
            if o["type"] == "circle":
                statics.append(Circle(o["cx"], o["cy"], o["r"]))
            elif o["type"] == "rect":
                statics.append(Rect(o["x"], o["y"], o["w"], o["h"]))
            else:
                raise ValueError(f"unknown obstacle type {o['type']!r}")
        dyn = [MovingBox(b["width"], b["height"], b["speed"], b["waypoint_seed"],
                         Rect(b["bounds"]["x"], b["bounds"]["y"],
                              b["bounds"]["w"], b["bounds"]["h"]))
               for b in d.get("dynamic_obstacles", [])]
        sp = d.get("start_pose", {})
        return cls(
            width=d.get("width", 17.0), height=d.get("height", 8.0),
            robot_footprint_radius=d.get("robot_footprint_radius", 0.3),
            robot_kind=d.get("robot_kind", "diff"),
            start_pose=Pose2D(sp.get("x", 1.5), sp.get("y", 4.0), sp.get("theta", 0.0)),
            static_obstacles=statics, dynamic_obstacles=dyn,
            v_limit=d.get("v_limit", 1.0), vy_limit=d.get("vy_limit", 1.0),
            w_limit=d.get("w_limit", 2.0),
        )


def check_collision(spec: WorldSpec, x: float, y: float, t: float) -> bool:
    """True when the robot disc at (x, y) overlaps an obstacle or pokes out
    of the room at time t."""
    r = spec.robot_footprint_radius
    if x - r < 0.0 or y - r < 0.0 or x + r > spec.width or y + r > spec.height:
        return True
    for o in spec.static_obstacles:
        if isinstance(o, Circle):
            if disc_circle_collides(x, y, r, o):
                return True
        elif disc_rect_collides(x, y, r, o):
            return True
    for b in spec.dynamic_obstacles:
        if disc_rect_collides(x, y, r, b.rect_at(t)):
            return True
    return False


def raycast_scan(spec: WorldSpec, pose: Pose2D, t: float, n_rays: int = 360,
                 range_max: float = 5.0) -> LaserScan:
    """Exact 2D range scan from `pose` at time `t`.

    Rays sweep the full circle starting at -pi relative to the heading. A ray
    that reaches nothing before range_max reports exactly range_max.
    """
    angle_min = -math.pi
    inc = 2.0 * math.pi / n_rays
    bearings = angle_min + inc * np.arange(n_rays)
    ang = pose.theta + bearings
    dirs = np.column_stack((np.cos(ang), np.sin(ang)))
    dist = ray_box_exit(pose.x, pose.y, dirs, spec.width, spec.height)
    for o in spec.static_obstacles:
        if isinstance(o, Circle):
            d = ray_circle_hits(pose.x, pose.y, dirs, o)
        else:
            d = ray_rect_hits(pose.x, pose.y, dirs, o)
        dist = np.minimum(dist, d)
    for b in spec.dynamic_obstacles:
        d = ray_rect_hits(pose.x, pose.y, dirs, b.rect_at(t))
        dist = np.minimum(dist, d)
    return LaserScan(angle_min, inc, range_max,
                     np.minimum(dist, range_max), stamp=t)


class WorldState:
    """One room plus its robot; owns the virtual clock for this world."""

    def __init__(self, spec: WorldSpec):
        self.spec = spec
        self.pose = spec.start_pose.copy()
        self.time = 0.0
        self.collision = False
        self.last_twist = Twist()

    def scan(self, n_rays: int = 360, range_max: float = 5.0) -> LaserScan:
        return raycast_scan(self.spec, self.pose, self.time, n_rays, range_max)

    def _clamp(self, t: Twist) -> Twist:
        s = self.spec
        return Twist(
            min(max(t.v, -s.v_limit), s.v_limit),
            min(max(t.vy, -s.vy_limit), s.vy_limit) if s.robot_kind == "omni" else 0.0,
            min(max(t.w, -s.w_limit), s.w_limit),
        )

    def step(self, twist: Twist, dt: float) -> None:
        """Advance dt seconds under `twist`, stopping at contact on collision.

        A collision latches self.collision; afterwards the robot still
        integrates (it may reverse away), but the trial harness normally ends
        the run at the first contact.
        """
        cmd = self._clamp(twist)
        t1 = self.time + dt
        if self.spec.robot_kind == "omni":
            target = integrate_omni(self.pose, cmd, dt)
        else:
            target = integrate_unicycle(self.pose, cmd, dt)
        if not check_collision(self.spec, target.x, target.y, t1):
            self.pose = target
        else:
            self.collision = True
            # binary search along the chord for the last free fraction
            lo, hi = 0.0, 1.0
            ox, oy, oth = self.pose.x, self.pose.y, self.pose.theta
            if check_collision(self.spec, ox, oy, t1):
                lo = 0.0  # overrun by a moving obstacle: stay put
            else:
                for _ in range(32):
                    mid = 0.5 * (lo + hi)
                    mx = ox + mid * (target.x - ox)
                    my = oy + mid * (target.y - oy)
                    if check_collision(self.spec, mx, my, t1):
                        hi = mid
                    else:
                        lo = mid
            self.pose = Pose2D(ox + lo * (target.x - ox),
                               oy + lo * (target.y - oy), target.theta)
        self.last_twist = cmd
        self.time = t1


def load_scenario(scenario_id: int, trial_seed: int = 0) -> tuple[WorldSpec, WorldSpec]:
    """Master and client room specs for scenario 1..5.

    The trial seed perturbs roaming-box walks so repeated trials of scenario 4
    explore different crossings while staying reproducible.
    """
    from .scenarios import build_scenario
    return build_scenario(scenario_id, trial_seed)
