"""Planar geometry primitives shared by the world model and the planners."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = (a + math.pi) % TWO_PI - math.pi
    if w == -math.pi:
        w = math.pi
    return w


@dataclass
class Pose2D:
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0

    def copy(self) -> "Pose2D":
        return Pose2D(self.x, self.y, self.theta)

    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass
class Twist:
    """Commanded body velocity. vy is only meaningful for omni bases."""
    v: float = 0.0
    vy: float = 0.0
    w: float = 0.0

    def is_zero(self) -> bool:
        return self.v == 0.0 and self.vy == 0.0 and self.w == 0.0

    def copy(self) -> "Twist":
        return Twist(self.v, self.vy, self.w)


@dataclass
class Circle:
    cx: float
    cy: float
    r: float


@dataclass
class Rect:
    """Axis-aligned rectangle, (x, y) is the min corner."""
    x: float
    y: float
    w: float
    h: float

    @property
    def cx(self) -> float:
        return self.x + 0.5 * self.w

    @property
    def cy(self) -> float:
        return self.y + 0.5 * self.h

    def contains(self, px: float, py: float) -> bool:
        return self.x <= px <= self.x + self.w and self.y <= py <= self.y + self.h


def disc_circle_collides(px: float, py: float, radius: float, c: Circle) -> bool:
    dx = px - c.cx
    dy = py - c.cy
    rr = radius + c.r
    return dx * dx + dy * dy <= rr * rr


def disc_rect_collides(px: float, py: float, radius: float, r: Rect) -> bool:
    qx = min(max(px, r.x), r.x + r.w)
    qy = min(max(py, r.y), r.y + r.h)
    dx = px - qx
    dy = py - qy
    return dx * dx + dy * dy <= radius * radius


# ---- vectorized ray casting -------------------------------------------------
# All helpers take a common origin, unit direction rows dirs (N, 2) and return
# per-ray hit distances with np.inf where the ray misses the shape.

def ray_circle_hits(ox: float, oy: float, dirs: np.ndarray, c: Circle) -> np.ndarray:
    ocx = ox - c.cx
    ocy = oy - c.cy
    b = dirs[:, 0] * ocx + dirs[:, 1] * ocy
    cc = ocx * ocx + ocy * ocy - c.r * c.r
    disc = b * b - cc
    out = np.full(dirs.shape[0], np.inf)
    ok = disc >= 0.0
    if not np.any(ok):
        return out
    sq = np.sqrt(disc[ok])
    t0 = -b[ok] - sq
    t1 = -b[ok] + sq
    t = np.where(t0 >= 0.0, t0, np.where(t1 >= 0.0, 0.0, np.inf))
    out[ok] = t
    return out


def ray_rect_hits(ox: float, oy: float, dirs: np.ndarray, r: Rect) -> np.ndarray:
    # near-zero direction components overflow to inf, which is the correct slab
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        tx1 = (r.x - ox) / dirs[:, 0]
        tx2 = (r.x + r.w - ox) / dirs[:, 0]
        ty1 = (r.y - oy) / dirs[:, 1]
        ty2 = (r.y + r.h - oy) / dirs[:, 1]
    # A zero direction component gives +-inf slabs; NaN shows up when the
    # origin sits exactly on a slab plane with zero direction, treat as miss.
    tx1 = np.nan_to_num(tx1, nan=-np.inf)
    tx2 = np.nan_to_num(tx2, nan=np.inf)
    ty1 = np.nan_to_num(ty1, nan=-np.inf)
    ty2 = np.nan_to_num(ty2, nan=np.inf)
    tmin = np.maximum(np.minimum(tx1, tx2), np.minimum(ty1, ty2))
    tmax = np.minimum(np.maximum(tx1, tx2), np.maximum(ty1, ty2))
    hit = (tmax >= tmin) & (tmax >= 0.0)
    t = np.where(tmin >= 0.0, tmin, 0.0)
    return np.where(hit, t, np.inf)


def ray_box_exit(ox: float, oy: float, dirs: np.ndarray, width: float, height: float) -> np.ndarray:
    """Distance at which rays starting inside [0,w]x[0,h] leave the box."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        tx1 = (0.0 - ox) / dirs[:, 0]
        tx2 = (width - ox) / dirs[:, 0]
        ty1 = (0.0 - oy) / dirs[:, 1]
        ty2 = (height - oy) / dirs[:, 1]
    tx1 = np.nan_to_num(tx1, nan=-np.inf)
    tx2 = np.nan_to_num(tx2, nan=np.inf)
    ty1 = np.nan_to_num(ty1, nan=-np.inf)
    ty2 = np.nan_to_num(ty2, nan=np.inf)
    tmax = np.minimum(np.maximum(tx1, tx2), np.maximum(ty1, ty2))
    return np.maximum(tmax, 0.0)
