"""Predictive force field from a laser scan and the reactive avoidance twist
derived from it."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Twist

BOUNDARY_TOL = 1e-9


@dataclass
class ForceParams:
    k: float = 0.5            # per-ray force gain
    r_o: float = 0.5          # trigger range; rays beyond it contribute nothing
    f_th: float = 1.0         # feedback activates at or above this force
    w_turn: float = 0.5       # rad/s turn-away rate while feedback is active
    k_safe: float = 1.0       # slope of the slow-down ramp
    d_stop: float = 0.2       # stop distance for the ramp
    v_nominal: float = 0.2    # forward speed cap while feedback is active
    law: str = "inverse-range"  # or "gap-inverse": k / (r_o - r) inside r_o


@dataclass
class ForceVector:
    """Per-ray force magnitudes plus the scan they were derived from."""
    values: np.ndarray
    bearings: np.ndarray
    ranges: np.ndarray
    max_f: float
    argmax_bearing: float
    stamp: float = 0.0


def _per_ray_force(ranges: np.ndarray, p: ForceParams) -> np.ndarray:
    r = np.maximum(ranges, 1e-6)
    if p.law == "gap-inverse":
        inside = p.k / np.maximum(p.r_o - r, 1e-6)
    elif p.law == "inverse-range":
        inside = p.k / r
    else:
        raise ValueError(f"unknown force law {p.law!r}")
    f = np.where(ranges < p.r_o, inside, 0.0)
    return np.where(np.abs(ranges - p.r_o) <= BOUNDARY_TOL, 1.0, f)


def compute_force(bearings: np.ndarray, ranges: np.ndarray, p: ForceParams,
                  stamp: float = 0.0) -> ForceVector:
    """Evaluate the force field over one scan.

    Ties on the maximum are broken toward the smallest |bearing|, then the
    lowest ray index, so the argmax is deterministic.
    """
    bearings = np.asarray(bearings, dtype=float)
    ranges = np.asarray(ranges, dtype=float)
    f = _per_ray_force(ranges, p)
    if f.size == 0:
        return ForceVector(f, bearings, ranges, 0.0, 0.0, stamp)
    fmax = float(np.max(f))
    at_max = np.flatnonzero(f == fmax)
    order = np.lexsort((at_max, np.abs(bearings[at_max])))
    idx = int(at_max[order[0]])
    return ForceVector(f, bearings, ranges, fmax, float(bearings[idx]), stamp)


def min_forward_range(force: ForceVector) -> float:
    """Closest range in the forward +-90 degree sector."""
    fwd = np.abs(force.bearings) <= math.pi / 2.0
    if not np.any(fwd):
        return float("inf")
    return float(np.min(force.ranges[fwd]))


def reactive_twist(force: ForceVector, p: ForceParams) -> Twist | None:
    """Turn-away and slow-down command, or None while the field is quiet.

    The turn direction opposes the strongest ray's bearing; a dead-ahead
    threat (bearing exactly 0) turns clockwise. Forward speed ramps down
    with the closest forward-sector range and never exceeds v_nominal.
    """
    if force.max_f < p.f_th:
        return None
    sign = 1.0 if force.argmax_bearing >= 0.0 else -1.0
    d_min = min_forward_range(force)
    v = min(max(p.k_safe * (d_min - p.d_stop), 0.0), p.v_nominal)
    return Twist(v=v, vy=0.0, w=-sign * p.w_turn)
