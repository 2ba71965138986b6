"""Scripted operator: steering geometry, obstacle caution, and the goal
confirmation latch."""
import math

import numpy as np
import pytest

from atsim.geometry import Pose2D, Twist
from atsim.kinematics import integrate_unicycle
from atsim.teleop import ScriptedTeleop, TeleopParams
from atsim.world import LaserScan, WorldSpec, WorldState, load_scenario, raycast_scan


def open_scan(n=360, rng=5.0):
    return LaserScan(-math.pi, 2.0 * math.pi / n, rng,
                     np.full(n, rng, dtype=float))


def test_turns_toward_goal():
    op = ScriptedTeleop((0.0, 5.0))
    tw, confirm = op.step(Pose2D(0.0, 0.0, 0.0), open_scan())
    assert not confirm
    assert tw.w > 0.0          # goal is 90 degrees to the left
    assert tw.v == 0.15        # big heading error slows the cruise
    tw2, _ = ScriptedTeleop((5.0, 0.0)).step(Pose2D(0.0, 0.0, 0.0), open_scan())
    assert tw2.w == pytest.approx(0.0)
    assert tw2.v == TeleopParams().cruise


def test_turn_rate_saturates():
    op = ScriptedTeleop((-5.0, -0.1))   # nearly straight behind
    tw, _ = op.step(Pose2D(0.0, 0.0, 0.0), open_scan())
    assert abs(tw.w) == TeleopParams().w_max


def test_confirm_latches_and_zeroes():
    op = ScriptedTeleop((1.0, 0.0))
    tw, confirm = op.step(Pose2D(0.8, 0.0, 0.0), open_scan())
    assert confirm and tw.is_zero()
    # once latched it stays confirmed even when moved away
    tw, confirm = op.step(Pose2D(-5.0, 0.0, 0.0), open_scan())
    assert confirm and tw.is_zero()


def test_slows_near_obstacle_ahead():
    params = TeleopParams()
    scan = open_scan()
    clear, _ = ScriptedTeleop((5.0, 0.0)).step(Pose2D(0.0, 0.0, 0.0), scan)
    blocked_scan = open_scan()
    blocked_scan.ranges[180] = 0.7  # bearing 0, inside avoid_range
    slow, _ = ScriptedTeleop((5.0, 0.0)).step(Pose2D(0.0, 0.0, 0.0), blocked_scan)
    assert slow.v < clear.v
    near_scan = open_scan()
    near_scan.ranges[180] = params.hard_range
    crawl, _ = ScriptedTeleop((5.0, 0.0)).step(Pose2D(0.0, 0.0, 0.0), near_scan)
    # the caution ramp floors at a fifth of cruise rather than a full stop
    assert crawl.v == pytest.approx(0.2 * params.cruise)


def test_steers_away_from_closer_side():
    scan = open_scan()
    # wall fragment on the right side ahead (negative bearings)
    scan.ranges[150:180] = 0.8
    tw, _ = ScriptedTeleop((5.0, 0.0)).step(Pose2D(0.0, 0.0, 0.0), scan)
    assert tw.w > 0.0  # pushed left, away from the right-side threat
    scan2 = open_scan()
    scan2.ranges[181:211] = 0.8
    tw2, _ = ScriptedTeleop((5.0, 0.0)).step(Pose2D(0.0, 0.0, 0.0), scan2)
    assert tw2.w < 0.0


def test_creeps_into_the_goal_circle():
    op = ScriptedTeleop((1.0, 0.0))
    tw, confirm = op.step(Pose2D(0.0, 0.0, 0.0), open_scan())
    assert not confirm
    assert tw.v <= 0.3  # goal_slow_radius cap


def test_closed_loop_reaches_goal_in_obstacle_room():
    """Drive the real scenario-2 room to the standard goal point."""
    _, spec = load_scenario(2)
    start = spec.start_pose
    goal = (start.x + 6.0, start.y)
    op = ScriptedTeleop(goal)
    w = WorldState(spec)
    confirmed = False
    for k in range(1200):
        scan = raycast_scan(spec, w.pose, w.time)
        tw, confirmed = op.step(w.pose, scan)
        if confirmed:
            break
        for _ in range(2):
            w.step(tw, 0.05)
        assert not w.collision
    assert confirmed
    assert math.hypot(w.pose.x - goal[0], w.pose.y - goal[1]) <= 0.35
