"""Room worlds: scan exactness, collision latching, moving-box determinism,
and spec round-tripping."""
import math

import numpy as np
import pytest

from atsim.geometry import Circle, Pose2D, Rect, Twist
from atsim.world import (MovingBox, WorldSpec, WorldState, check_collision,
                         load_scenario, raycast_scan)


def empty_room(w=10.0, h=6.0):
    return WorldSpec(width=w, height=h, static_obstacles=[],
                     start_pose=Pose2D(5.0, 3.0, 0.0))


def test_scan_empty_room_exact_wall_distances():
    spec = empty_room()
    scan = raycast_scan(spec, Pose2D(5.0, 3.0, 0.0), 0.0, n_rays=360,
                        range_max=100.0)
    b = scan.bearings()
    assert scan.angle_min == -math.pi
    assert scan.angle_increment == pytest.approx(2.0 * math.pi / 360.0)
    # ray straight ahead (bearing 0) is index 180 and sees the right wall
    assert b[180] == pytest.approx(0.0, abs=1e-12)
    assert scan.ranges[180] == pytest.approx(5.0)
    assert scan.ranges[0] == pytest.approx(5.0)    # bearing -pi: left wall
    assert scan.ranges[90] == pytest.approx(3.0)   # straight down
    assert scan.ranges[270] == pytest.approx(3.0)  # straight up


def test_scan_caps_at_range_max():
    spec = empty_room()
    scan = raycast_scan(spec, Pose2D(5.0, 3.0, 0.0), 0.0, range_max=2.5)
    assert np.all(scan.ranges <= 2.5)
    assert scan.ranges[180] == 2.5


def test_scan_sees_circle_at_exact_distance():
    spec = empty_room()
    spec.static_obstacles.append(Circle(7.0, 3.0, 0.5))
    scan = raycast_scan(spec, Pose2D(5.0, 3.0, 0.0), 0.0)
    assert scan.ranges[180] == pytest.approx(1.5)


def test_scan_rotates_with_heading():
    spec = empty_room()
    spec.static_obstacles.append(Circle(5.0, 5.0, 0.5))
    # facing +y: the circle is dead ahead at 1.5
    scan = raycast_scan(spec, Pose2D(5.0, 3.0, math.pi / 2.0), 0.0)
    assert scan.ranges[180] == pytest.approx(1.5)


def test_scan_bit_identical_for_same_pose():
    spec, _ = load_scenario(2)
    a = raycast_scan(spec, Pose2D(2.0, 4.0, 0.3), 0.0)
    b = raycast_scan(spec, Pose2D(2.0, 4.0, 0.3), 0.0)
    assert np.array_equal(a.ranges, b.ranges)


def test_check_collision_walls_and_shapes():
    spec = empty_room()
    r = spec.robot_footprint_radius
    assert not check_collision(spec, 5.0, 3.0, 0.0)
    assert check_collision(spec, r - 1e-9, 3.0, 0.0)     # poking the left wall
    assert not check_collision(spec, r, 3.0, 0.0)        # exactly flush is fine
    spec.static_obstacles.append(Circle(7.0, 3.0, 0.5))
    assert check_collision(spec, 6.2, 3.0, 0.0)          # 0.8 gap = r + 0.5
    assert not check_collision(spec, 6.19, 3.0, 0.0)


def test_world_step_latches_collision_and_stops_at_contact():
    spec = empty_room()
    spec.static_obstacles.append(Rect(6.0, 0.0, 1.0, 6.0))
    w = WorldState(spec)
    for _ in range(200):
        w.step(Twist(1.0, 0.0, 0.0), 0.05)
        if w.collision:
            break
    assert w.collision
    # the bisected contact pose must touch, not penetrate
    assert w.pose.x <= 6.0 - spec.robot_footprint_radius + 1e-6
    assert w.pose.x >= 6.0 - spec.robot_footprint_radius - 5e-3


def test_world_clamps_twist_to_actuator_limits():
    w = WorldState(empty_room())
    w.step(Twist(99.0, 5.0, -99.0), 0.1)
    assert w.last_twist.v == w.spec.v_limit
    assert w.last_twist.vy == 0.0          # diff drive cannot slide
    assert w.last_twist.w == -w.spec.w_limit
    omni = empty_room()
    omni.robot_kind = "omni"
    w2 = WorldState(omni)
    w2.step(Twist(0.0, 5.0, 0.0), 0.1)
    assert w2.last_twist.vy == omni.vy_limit


def test_moving_box_pure_function_of_time():
    box = MovingBox(1.0, 1.0, 0.5, waypoint_seed=42,
                    bounds=Rect(2.0, 2.0, 4.0, 3.0))
    late = box.center_at(37.0)
    early = box.center_at(5.0)
    # query order must not matter
    box2 = MovingBox(1.0, 1.0, 0.5, waypoint_seed=42,
                     bounds=Rect(2.0, 2.0, 4.0, 3.0))
    assert box2.center_at(5.0) == early
    assert box2.center_at(37.0) == late
    # center stays inside its bounds forever
    for t in np.linspace(0.0, 120.0, 241):
        cx, cy = box.center_at(float(t))
        assert 2.0 <= cx <= 6.0
        assert 2.0 <= cy <= 5.0
    # negative time clamps to the spawn point
    assert box.center_at(-3.0) == (4.0, 3.5)


def test_moving_box_speed_consistency():
    box = MovingBox(1.0, 1.0, 0.5, waypoint_seed=7,
                    bounds=Rect(0.0, 0.0, 8.0, 8.0))
    a = np.array(box.center_at(10.0))
    b = np.array(box.center_at(10.1))
    # along the polyline the center moves at most speed * dt
    assert np.linalg.norm(b - a) <= 0.5 * 0.1 + 1e-9


def test_spec_round_trip_through_dict():
    spec, _ = load_scenario(4, trial_seed=3)
    d = spec.to_dict()
    back = WorldSpec.from_dict(d)
    assert back.to_dict() == d
    assert len(back.dynamic_obstacles) == len(spec.dynamic_obstacles)
    if back.dynamic_obstacles:
        t = 12.5
        assert back.dynamic_obstacles[0].center_at(t) == \
            spec.dynamic_obstacles[0].center_at(t)


def test_spec_rejects_unknown_obstacle_type():
    with pytest.raises(ValueError):
        WorldSpec.from_dict({"static_obstacles": [{"type": "triangle"}]})


def test_scenarios_load_and_differ():
    for sid in (1, 2, 3, 4, 5):
        master, client = load_scenario(sid, trial_seed=0)
        assert master.static_obstacles == []          # supervising room is empty
        assert master.width == client.width
        if sid == 1:
            assert client.static_obstacles == []
        if sid in (2, 3):
            assert len(client.static_obstacles) > 0
        if sid == 4:
            assert len(client.dynamic_obstacles) > 0
        if sid == 5:
            assert client.robot_kind == "omni"
    dense = load_scenario(3)[1]
    sparse = load_scenario(2)[1]
    assert len(dense.static_obstacles) > len(sparse.static_obstacles)


def test_scenario_seed_changes_box_walks_only():
    a_m, a_c = load_scenario(4, trial_seed=0)
    b_m, b_c = load_scenario(4, trial_seed=1)
    assert a_c.static_obstacles == b_c.static_obstacles
    sa = a_c.dynamic_obstacles[0].waypoint_seed
    sb = b_c.dynamic_obstacles[0].waypoint_seed
    assert sa != sb
