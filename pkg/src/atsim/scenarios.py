"""The five benchmark room layouts.

Scenario 1 is an empty room, 2 adds sparse static clutter, 3 is dense static
clutter, 4 adds two roaming boxes to the sparse layout, and 5 is the sparse
layout with an omnidirectional client base. The master room is always empty
here; the harness mirrors obstacles into it only for the blind-teleop case.

`scenarios/1.json` .. `5.json` at the repository root are the serialized
catalog of these builders; `catalog_entry` produces the same dictionaries.
"""
from __future__ import annotations

from .geometry import Circle, Pose2D, Rect
from .world import MovingBox, WorldSpec

ROOM_W = 17.0
ROOM_H = 8.0
START = Pose2D(1.5, 4.0, 0.0)
FOOTPRINT = 0.3

# Default goal offsets in the start-aligned frame, 6..10 m out.
DEFAULT_GOALS = [(6.0, 0.0), (7.0, 0.5), (8.0, -0.5), (9.0, 1.0), (10.0, 0.0)]


def _base(kind: str = "diff") -> WorldSpec:
    return WorldSpec(width=ROOM_W, height=ROOM_H,
                     robot_footprint_radius=FOOTPRINT, robot_kind=kind,
                     start_pose=START.copy())


# Clutter sits along the start-to-goal corridor so avoidance gets exercised,
# but every default goal point keeps >= 0.6 m of surface clearance so the
# planner can park the full hull there with its inflation margin intact.

def _sparse_obstacles() -> list:
    return [
        Circle(4.9, 4.55, 0.35),
        Rect(6.7, 2.55, 0.9, 0.72),
        Circle(9.4, 5.3, 0.3),
        Rect(10.15, 3.2, 0.7, 0.72),
        Circle(12.5, 4.35, 0.3),
    ]


def _dense_obstacles() -> list:
    return [
        Circle(3.6, 2.9, 0.3),
        Circle(4.2, 4.9, 0.35),
        Rect(5.6, 2.6, 0.8, 0.9),
        Circle(6.9, 4.95, 0.4),
        Rect(6.3, 5.9, 0.9, 0.7),
        Rect(8.0, 2.4, 0.8, 0.7),
        Circle(9.5, 5.6, 0.35),
        Rect(10.7, 2.7, 0.7, 0.6),
        Circle(12.3, 4.6, 0.3),
        Rect(12.0, 2.0, 0.8, 0.7),
    ]


def _roaming_boxes(trial_seed: int) -> list[MovingBox]:
    # Seeds mix the catalog seed with the trial seed so each trial sees a
    # different, reproducible walk. Bounds constrain the box centers; the
    # faces reach 0.2 m further out.
    return [
        MovingBox(0.4, 0.4, 0.15, 1009 + 7919 * trial_seed,
                  Rect(5.6, 4.8, 1.4, 1.0)),
        MovingBox(0.4, 0.4, 0.15, 2003 + 7919 * trial_seed,
                  Rect(8.4, 1.9, 1.4, 0.9)),
    ]


def build_scenario(scenario_id: int, trial_seed: int = 0) -> tuple[WorldSpec, WorldSpec]:
    if scenario_id not in (1, 2, 3, 4, 5):
        raise ValueError(f"unknown scenario {scenario_id}")
    master = _base("diff")
    client = _base("omni" if scenario_id == 5 else "diff")
    if scenario_id in (2, 4, 5):
        client.static_obstacles = _sparse_obstacles()
    elif scenario_id == 3:
        client.static_obstacles = _dense_obstacles()
    if scenario_id == 4:
        client.dynamic_obstacles = _roaming_boxes(trial_seed)
    return master, client


def catalog_entry(scenario_id: int) -> dict:
    """JSON-ready form of one scenario with the seed-0 box walks."""
    master, client = build_scenario(scenario_id, 0)
    return {"scenario": scenario_id,
            "master": master.to_dict(),
            "client": client.to_dict()}
