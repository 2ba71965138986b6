"""Drive kinematics: unicycle and omnidirectional integration, velocity
coupling gains, and mecanum wheel inverse kinematics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Pose2D, Twist, wrap_angle

# Below this angular rate the arc model degenerates; fall back to a straight
# step so the update stays continuous across the switch.
OMEGA_EPS = 1e-6


@dataclass
class CouplingGains:
    """Diagonal master->client velocity coupling."""
    k_v: float = 1.0
    k_w: float = 1.0


def scale_twist(t: Twist, gains: CouplingGains) -> Twist:
    return Twist(gains.k_v * t.v, gains.k_v * t.vy, gains.k_w * t.w)


def integrate_unicycle(pose: Pose2D, t: Twist, dt: float) -> Pose2D:
    """Advance a differential-drive pose by one step.

    Uses the exact constant-twist arc when |w| is meaningful and a straight
    Euler step otherwise. vy is ignored: the base cannot slide sideways.
    """
    v, w, th = t.v, t.w, pose.theta
    if abs(w) >= OMEGA_EPS:
        x = pose.x + (v / w) * (math.sin(th + w * dt) - math.sin(th))
        y = pose.y - (v / w) * (math.cos(th + w * dt) - math.cos(th))
    else:
        x = pose.x + v * math.cos(th) * dt
        y = pose.y + v * math.sin(th) * dt
    return Pose2D(x, y, wrap_angle(th + w * dt))


def integrate_omni(pose: Pose2D, t: Twist, dt: float) -> Pose2D:
    """Advance an omnidirectional pose by one Euler step (body frame twist)."""
    c = math.cos(pose.theta)
    s = math.sin(pose.theta)
    x = pose.x + (t.v * c - t.vy * s) * dt
    y = pose.y + (t.v * s + t.vy * c) * dt
    return Pose2D(x, y, wrap_angle(pose.theta + t.w * dt))


# ---- mecanum wheel model -----------------------------------------------------

@dataclass
class MecanumParams:
    """Four-wheel mecanum base geometry.

    wheel_scale is the primary wheel scale factor, roller_scale the roller
    scale factor; tx/ty are the wheel mount offsets from the body center.
    """
    wheel_scale: float = 0.05
    roller_scale: float = 0.024
    tx: float = 0.228
    ty: float = 0.158


# Roller angles per wheel index (1..4) and the signs of the (ty, tx) column.
_ETA = (-math.pi / 4.0, math.pi / 4.0, -math.pi / 4.0, math.pi / 4.0)
_OFFSET_SIGNS = ((1.0, 1.0), (1.0, -1.0), (-1.0, -1.0), (-1.0, 1.0))


def mecanum_contact_jacobian(wheel: int, theta: float, p: MecanumParams) -> np.ndarray:
    """Contact Jacobian of one wheel (wheel in 1..4) at body heading theta.

    Maps (wheel rate, roller rate, body yaw rate) to world-frame velocity.
    """
    if wheel not in (1, 2, 3, 4):
        raise ValueError("wheel index must be 1..4")
    eta = _ETA[wheel - 1]
    sy, sx = _OFFSET_SIGNS[wheel - 1]
    a = theta + eta
    return np.array([
        [-p.wheel_scale * math.sin(theta), p.roller_scale * math.sin(a), sy * p.ty],
        [p.wheel_scale * math.cos(theta), -p.roller_scale * math.cos(a), sx * p.tx],
        [0.0, 0.0, 1.0],
    ])


def mecanum_wheel_speeds(vel: tuple[float, float, float], theta: float,
                         p: MecanumParams | None = None) -> np.ndarray:
    """Inverse kinematics: world-frame (xdot, ydot, thetadot) to the four
    primary wheel rates.

    Each wheel rate is the first generalized coordinate recovered by
    inverting that wheel's contact Jacobian; the transpose form is rank
    deficient across the four wheels and cannot be round-tripped.
    """
    if p is None:
        p = MecanumParams()
    u = np.asarray(vel, dtype=float)
    out = np.empty(4)
    for i in range(4):
        j = mecanum_contact_jacobian(i + 1, theta, p)
        out[i] = np.linalg.solve(j, u)[0]
    return out
