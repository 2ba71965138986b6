"""Trial supervisor: wires one computation-placement case to one scenario and
runs it on a single-threaded virtual clock.

Cases:
  0  everything on the client robot, no network
  1  client streams scan+odom to a remote navigator, twists come back
  2  blind mirror: a driver steers the master from its own (mirrored) room,
     the client replays the master's executed motion open loop
  3  coupled: autonomy drives the master in an empty room, the client mirrors
     the master's drive command one tick late and streams reactive feedback
     back; the master applies feedback as the wire delivers it (next tick)
     and the client holds its own copy back one extra tick to match, so the
     client's executed twist is exactly the master's from the previous tick
     and the mirror never tears at feedback episode boundaries

Each control tick runs: sensors -> link deliveries -> nodes -> multiplexer
arbitration -> world stepping. Virtual time only; nothing here reads a wall
clock, so a (config, seed) pair always reproduces the same transcript.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .force import ForceParams, compute_force, reactive_twist
from .geometry import Pose2D, Twist, wrap_angle
from .kinematics import CouplingGains, MecanumParams, mecanum_wheel_speeds, scale_twist
from .mux import VelocityMux
from .navigator import MODE_REACHED, AutonomyNode
from .netlink import (CLIENT, MASTER, LinkConfig, SimulatedLink, encode,
                      make_fb, make_goal, make_odom, make_scan, make_status,
                      make_twist)
from .planning import VelocityLimits
from .teleop import ScriptedTeleop
from .world import LaserScan, WorldState, load_scenario

CONTROL_DT = 0.1
PHYSICS_DT = 0.05
DRAIN_S = 0.5
PING_PERIOD = 1.0

DEFAULT_MUX = {"channels": [
    {"name": "fb", "priority": 100, "timeout": 0.3},
    {"name": "nav", "priority": 10, "timeout": 0.3},
]}

# message kinds a node consumes; ping/pong stays link-level
_NODE_KINDS = ("twist", "odom", "scan", "fb", "goal", "status")

# deterministic per-operation compute model (seconds); counts are exact, the
# weights are a fixed cost table, so the proxy replays exactly
COST = {
    "grid_update": 5.0e-3,
    "plan": 2.0e-2,
    "dwa_step": 2.0e-3,
    "force_eval": 5.0e-4,
    "teleop_step": 2.0e-4,
    "ik_eval": 1.0e-4,
    "msg_in": 5.0e-5,
    "msg_out": 5.0e-5,
}
COST_MSG_BYTE = 1.0e-6


class ComputeLedger:
    """Per-node operation counts plus a fixed-weight time proxy.

    `msg_in` counts messages the node consumed, `msg_out` messages it
    produced; link-level ping/pong traffic belongs to neither.
    """

    def __init__(self):
        self.counts = {k: 0 for k in COST}
        self.msg_bytes = 0

    def add(self, op: str, n: int = 1) -> None:
        self.counts[op] += n

    def add_in(self, nbytes: int) -> None:
        self.counts["msg_in"] += 1
        self.msg_bytes += nbytes

    def add_out(self, nbytes: int) -> None:
        self.counts["msg_out"] += 1
        self.msg_bytes += nbytes

    @property
    def proxy_s(self) -> float:
        s = sum(COST[k] * n for k, n in self.counts.items())
        return s + COST_MSG_BYTE * self.msg_bytes

    def to_dict(self) -> dict:
        d = dict(self.counts)
        d["msg_bytes"] = self.msg_bytes
        d["proxy_s"] = self.proxy_s
        return d


@dataclass
class CaseConfig:
    case_id: int = 0
    scenario_id: int = 1
    goal: tuple[float, float] = (6.0, 0.0)  # start-aligned frame, meters
    gains: CouplingGains = field(default_factory=CouplingGains)
    # stop distance covers the hull radius plus a margin; the bare library
    # default is a point-robot knee and would let the creep touch first
    force: ForceParams = field(default_factory=lambda: ForceParams(d_stop=0.4))
    link: LinkConfig = field(default_factory=LinkConfig)
    seed: int = 0
    trial_timeout: float = 300.0
    teleop_source: str = "scripted"  # case 2/3 master drive: scripted|console
    master_applies_feedback: bool = True
    nav_limits: VelocityLimits = field(default_factory=VelocityLimits)
    mux: dict = field(default_factory=lambda: json.loads(json.dumps(DEFAULT_MUX)))

    def validate(self) -> None:
        if self.case_id not in (0, 1, 2, 3):
            raise ValueError(f"case_id must be 0..3, got {self.case_id}")
        if self.scenario_id not in (1, 2, 3, 4, 5):
            raise ValueError(f"scenario_id must be 1..5, got {self.scenario_id}")
        if self.teleop_source not in ("scripted", "console"):
            raise ValueError(f"unknown teleop_source {self.teleop_source!r}")
        if self.teleop_source == "console" and self.case_id not in (2, 3):
            raise ValueError("console drive needs case 2 or 3")
        if self.trial_timeout < 0.0:
            raise ValueError("trial_timeout must be >= 0")

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "scenario_id": self.scenario_id,
            "goal": [self.goal[0], self.goal[1]],
            "gains": {"k_v": self.gains.k_v, "k_w": self.gains.k_w},
            "force": asdict(self.force),
            "link": asdict(self.link),
            "seed": self.seed,
            "trial_timeout": self.trial_timeout,
            "teleop_source": self.teleop_source,
            "master_applies_feedback": self.master_applies_feedback,
            "nav_limits": asdict(self.nav_limits),
            "mux": self.mux,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CaseConfig":
        cfg = cls(
            case_id=int(d.get("case_id", 0)),
            scenario_id=int(d.get("scenario_id", 1)),
            goal=tuple(d.get("goal", (6.0, 0.0))),
            seed=int(d.get("seed", 0)),
            trial_timeout=float(d.get("trial_timeout", 300.0)),
            teleop_source=d.get("teleop_source", "scripted"),
            master_applies_feedback=bool(d.get("master_applies_feedback", True)),
        )
        if "gains" in d:
            cfg.gains = CouplingGains(**d["gains"])
        if "force" in d:
            cfg.force = ForceParams(**d["force"])
        if "link" in d:
            cfg.link = LinkConfig(**d["link"])
        if "nav_limits" in d:
            cfg.nav_limits = VelocityLimits(**d["nav_limits"])
        if "mux" in d:
            cfg.mux = d["mux"]
        return cfg


@dataclass
class TrialMetrics:
    case_id: int
    scenario_id: int
    goal: tuple[float, float]
    seed: int
    reached: bool
    collision: bool
    end_reason: str
    duration_s: float
    efficiency_s: float
    goal_error_m: float
    tracking_error_m: float
    client_throughput_bps: float
    master_throughput_bps: float
    client_loss_bps: float
    master_loss_bps: float
    latency_avg_s: float
    compute: dict

    def to_dict(self) -> dict:
        d = asdict(self)
        d["goal"] = [self.goal[0], self.goal[1]]
        return d


def goal_error(final: Pose2D, start: Pose2D, goal: tuple[float, float]) -> float:
    """Distance from the robot's start-aligned position to the goal point."""
    dx = final.x - start.x
    dy = final.y - start.y
    c = math.cos(-start.theta)
    s = math.sin(-start.theta)
    rx = c * dx - s * dy
    ry = s * dx + c * dy
    return math.hypot(rx - goal[0], ry - goal[1])


def tracking_error(m_traj: np.ndarray, c_traj: np.ndarray,
                   m_start: Pose2D, c_start: Pose2D) -> float:
    """Mean distance between the start-aligned trajectories on a common tick
    grid. Both arrays are (N, 2) world positions sampled at the same ticks."""
    if len(m_traj) == 0:
        return 0.0

    def align(traj, start):
        d = traj - np.array([start.x, start.y])
        c = math.cos(-start.theta)
        s = math.sin(-start.theta)
        rot = np.array([[c, -s], [s, c]])
        return d @ rot.T

    diff = align(np.asarray(m_traj), m_start) - align(np.asarray(c_traj), c_start)
    return float(np.mean(np.hypot(diff[:, 0], diff[:, 1])))


class _WireLog:
    """Counts and transcript entries for messages crossing the link."""

    def __init__(self, link: SimulatedLink | None, transcript: list):
        self.link = link
        self.transcript = transcript

    def send(self, side: str, msg: dict, now: float) -> int:
        nbytes = len(encode(msg))
        if self.link is not None:
            self.link.send(side, msg, now)
            self.transcript.append({"t": "wire", "dir": side, "kind": msg["t"],
                                    "bytes": nbytes, "ts": round(now, 6)})
        return nbytes


class Trial:
    """One configured run; see run_trial for the entry point."""

    def __init__(self, cfg: CaseConfig, console=None):
        cfg.validate()
        self.cfg = cfg
        master_spec, client_spec = load_scenario(cfg.scenario_id, cfg.seed)
        if cfg.case_id == 2:
            # the driver must see what the client faces: mirror the layout
            master_spec.static_obstacles = list(client_spec.static_obstacles)
        self.master = WorldState(master_spec)
        self.client = WorldState(client_spec)
        self.m_start = master_spec.start_pose.copy()
        self.c_start = client_spec.start_pose.copy()
        gx, gy = cfg.goal
        th0 = self.m_start.theta
        self.m_goal = (self.m_start.x + gx * math.cos(th0) - gy * math.sin(th0),
                       self.m_start.y + gx * math.sin(th0) + gy * math.cos(th0))
        th0c = self.c_start.theta
        self.c_goal = (self.c_start.x + gx * math.cos(th0c) - gy * math.sin(th0c),
                       self.c_start.y + gx * math.sin(th0c) + gy * math.cos(th0c))
        self._check_goal_pose(client_spec)

        self.link = None
        if cfg.case_id != 0:
            link_cfg = LinkConfig(cfg.link.base_delay, cfg.link.jitter,
                                  cfg.link.loss_prob,
                                  cfg.link.seed + 104729 * cfg.seed)
            self.link = SimulatedLink(link_cfg)
        self.m_mux = VelocityMux.from_config(cfg.mux)
        self.c_mux = VelocityMux.from_config(cfg.mux)
        self.m_ledger = ComputeLedger()
        self.c_ledger = ComputeLedger()
        self.transcript: list[dict] = [{"t": "config", "cfg": cfg.to_dict()}]
        self.wire = _WireLog(self.link, self.transcript)
        self.console = console

        lim = cfg.nav_limits
        spec = client_spec
        if cfg.case_id == 0:
            self.nav = AutonomyNode(spec.width, spec.height, self.c_goal,
                                    spec.robot_footprint_radius, lim)
        elif cfg.case_id == 1:
            self.nav = AutonomyNode(spec.width, spec.height, self.c_goal,
                                    spec.robot_footprint_radius, lim)
            self._remote_scan = None
            self._remote_pose = None
            self._remote_done_ts = -1.0
            self._last_mode = self.nav.mode
        elif cfg.case_id == 2:
            self.driver = ScriptedTeleop(self.m_goal) if cfg.teleop_source == "scripted" else None
            self.nav = None
        else:
            self.nav = AutonomyNode(master_spec.width, master_spec.height,
                                    self.m_goal, master_spec.robot_footprint_radius, lim)
            self.driver = None  # console, when attached, feeds the nav channel

        self.m_traj: list[tuple[float, float]] = []
        self.c_traj: list[tuple[float, float]] = []
        self._fb_queue: list[tuple[float, Twist]] = []
        self.reach_time: float | None = None
        self.end_reason = "timeout"
        self.goal_confirmed = False
        self.last_fmax = 0.0
        self.last_m_scan: LaserScan | None = None
        self._next_ping = PING_PERIOD
        self._mecanum = MecanumParams()
        self._k = 0
        self._drain_until: float | None = None
        self._ended = False

    def _check_goal_pose(self, spec) -> None:
        from .world import check_collision
        gx, gy = self.c_goal
        r = spec.robot_footprint_radius
        if not (r <= gx <= spec.width - r and r <= gy <= spec.height - r):
            raise ValueError("goal lies outside the room")

    # ---- per-case node phases -------------------------------------------

    def _nodes_case0(self, now: float, c_scan: LaserScan) -> None:
        plans0 = self.nav.plans
        tw = self.nav.on_tick(now, self.client.pose, c_scan)
        self.c_ledger.add("grid_update")
        self.c_ledger.add("plan", self.nav.plans - plans0)
        self.c_ledger.add("dwa_step")
        self.c_mux.publish("nav", tw, now)

    def _nodes_case1(self, now: float, c_scan: LaserScan,
                     inbox_m: list, inbox_c: list) -> None:
        # client side: stream sensors, apply remote twists
        scan_msg = make_scan(c_scan.angle_min, c_scan.angle_increment,
                             c_scan.range_max, c_scan.ranges, now)
        self.c_ledger.add_out(self.wire.send(CLIENT, scan_msg, now))
        od = make_odom(self.client.pose.x, self.client.pose.y, self.client.pose.theta,
                       self.client.last_twist.v, self.client.last_twist.w, now)
        self.c_ledger.add_out(self.wire.send(CLIENT, od, now))
        for msg in inbox_c:
            if msg["t"] not in _NODE_KINDS:
                continue
            self.c_ledger.add_in(len(encode(msg)))
            if msg["t"] == "twist":
                self.c_mux.publish(msg["ch"], Twist(msg["v"], msg["vy"], msg["w"]), now)

        # remote side: rebuild the newest paired scan+odom and navigate
        for msg in inbox_m:
            if msg["t"] not in _NODE_KINDS:
                continue
            self.m_ledger.add_in(len(encode(msg)))
            if msg["t"] == "scan":
                self._remote_scan = msg
            elif msg["t"] == "odom":
                self._remote_pose = msg
        if now == 0.0:
            self.m_ledger.add_out(self.wire.send(MASTER, make_goal(*self.c_goal), now))
        sc, od_ = self._remote_scan, self._remote_pose
        if sc is not None and od_ is not None and sc["ts"] == od_["ts"] \
                and sc["ts"] > self._remote_done_ts:
            self._remote_done_ts = sc["ts"]
            pose = Pose2D(od_["x"], od_["y"], od_["th"])
            scan = LaserScan(sc["amin"], sc["ainc"], sc["rmax"],
                             np.asarray(sc["r"], dtype=float), sc["ts"])
            plans0 = self.nav.plans
            tw = self.nav.on_tick(now, pose, scan)
            self.m_ledger.add("grid_update")
            self.m_ledger.add("plan", self.nav.plans - plans0)
            self.m_ledger.add("dwa_step")
            msg = make_twist("nav", tw.v, tw.vy, tw.w, now)
            self.m_ledger.add_out(self.wire.send(MASTER, msg, now))
            if self.nav.mode != self._last_mode:
                self._last_mode = self.nav.mode
                self.m_ledger.add_out(self.wire.send(MASTER, make_status(self.nav.mode, now), now))

    def _nodes_case2(self, now: float, m_scan: LaserScan, inbox_c: list) -> None:
        if self.driver is not None:
            tw, confirm = self.driver.step(self.master.pose, m_scan)
            self.m_ledger.add("teleop_step")
            self.m_mux.publish("nav", tw, now)
            if confirm and not self.goal_confirmed:
                self.goal_confirmed = True
                self.reach_time = now
        elif self.console is not None:
            for tw, confirm in self.console.drain(now):
                if confirm:
                    if not self.goal_confirmed:
                        self.goal_confirmed = True
                        self.reach_time = now
                elif tw is not None:
                    self.m_mux.publish("nav", tw, now)
        # mirror the executed motion to the client as odometry
        lt = self.master.last_twist
        od = make_odom(self.master.pose.x, self.master.pose.y, self.master.pose.theta,
                       lt.v, lt.w, now)
        self.m_ledger.add_out(self.wire.send(MASTER, od, now))
        for msg in inbox_c:
            if msg["t"] not in _NODE_KINDS:
                continue
            self.c_ledger.add_in(len(encode(msg)))
            if msg["t"] == "odom":
                tw = scale_twist(Twist(msg["v"], 0.0, msg["w"]), self.cfg.gains)
                self.c_mux.publish("nav", tw, now)

    def _nodes_case3(self, now: float, m_scan: LaserScan, c_scan: LaserScan,
                     inbox_m: list, inbox_c: list) -> None:
        # master autonomy in its own (empty) room
        if self.console is not None:
            for tw, confirm in self.console.drain(now):
                if confirm:
                    if not self.goal_confirmed:
                        self.goal_confirmed = True
                        self.reach_time = now
                elif tw is not None:
                    self.m_mux.publish("nav", tw, now)
        else:
            plans0 = self.nav.plans
            tw = self.nav.on_tick(now, self.master.pose, m_scan)
            self.m_ledger.add("grid_update")
            self.m_ledger.add("plan", self.nav.plans - plans0)
            self.m_ledger.add("dwa_step")
            self.m_mux.publish("nav", tw, now)
            if self.nav.mode == MODE_REACHED and self.reach_time is None:
                self.reach_time = now
        for msg in inbox_m:
            if msg["t"] not in _NODE_KINDS:
                continue
            self.m_ledger.add_in(len(encode(msg)))
            if msg["t"] == "fb" and self.cfg.master_applies_feedback:
                self.m_mux.publish("fb", Twist(msg["vr"], 0.0, msg["wr"]), now)

        # couple the commanded velocity: the master's nav-channel twist goes
        # out as-is; arbitration against feedback happens on each MUX locally
        cmd = next(c for c in self.m_mux.channels() if c.name == "nav").twist
        msg = make_twist("nav", cmd.v, cmd.vy, cmd.w, now)
        self.m_ledger.add_out(self.wire.send(MASTER, msg, now))
        for m in inbox_c:
            if m["t"] not in _NODE_KINDS:
                continue
            self.c_ledger.add_in(len(encode(m)))
            if m["t"] == "twist":
                tw = scale_twist(Twist(m["v"], m["vy"], m["w"]), self.cfg.gains)
                self.c_mux.publish(m["ch"], tw, now)

        # client force field; the wire copy reaches the master next tick, and
        # the local copy is held back one extra tick (wire period plus mirror
        # period) so both rooms arbitrate congruent channel streams and the
        # client stays an exact one-tick replay of the master
        while self._fb_queue and self._fb_queue[0][0] <= now + 1e-9:
            _, tw_fb = self._fb_queue.pop(0)
            self.c_mux.publish("fb", tw_fb, now)
        force = compute_force(c_scan.bearings(), c_scan.ranges, self.cfg.force, now)
        self.c_ledger.add("force_eval")
        self.last_fmax = force.max_f
        rt = reactive_twist(force, self.cfg.force)
        if rt is not None:
            fb = make_fb(rt.v, rt.w, force.max_f, now)
            self.c_ledger.add_out(self.wire.send(CLIENT, fb, now))
            self._fb_queue.append((now + 2.0 * CONTROL_DT,
                                   scale_twist(rt, self.cfg.gains)))
        if self.client.spec.robot_kind == "omni":
            mecanum_wheel_speeds((self.client.last_twist.v, self.client.last_twist.vy,
                                  self.client.last_twist.w), self.client.pose.theta,
                                 self._mecanum)
            self.c_ledger.add("ik_eval")

    # ---- main loop --------------------------------------------------------

    def step(self) -> bool:
        """Advance one control tick; False once the trial has ended.

        The tick order is fixed: sensors, link deliveries, node callbacks,
        multiplexer arbitration, then two physics substeps.
        """
        cfg = self.cfg
        if self._ended:
            return False
        now = self._k * CONTROL_DT
        if now >= cfg.trial_timeout - 1e-9:
            if self.reach_time is not None:
                self.end_reason = "reached"
            self._ended = True
            return False
        # sensors
        m_scan = self.master.scan() if cfg.case_id in (2, 3) else None
        c_scan = self.client.scan() if cfg.case_id in (0, 1, 3) else None
        self.last_m_scan = m_scan
        # link deliveries
        inbox_m: list = []
        inbox_c: list = []
        if self.link is not None:
            if now >= self._next_ping:
                self.link.send_ping(MASTER, now)
                self._next_ping += PING_PERIOD
            inbox_m = self.link.poll(MASTER, now)
            inbox_c = self.link.poll(CLIENT, now)
        # nodes
        if cfg.case_id == 0:
            self._nodes_case0(now, c_scan)
            if self.nav.mode == MODE_REACHED and self.reach_time is None:
                self.reach_time = now
        elif cfg.case_id == 1:
            self._nodes_case1(now, c_scan, inbox_m, inbox_c)
            if self.nav.mode == MODE_REACHED and self.reach_time is None:
                self.reach_time = now
        elif cfg.case_id == 2:
            self._nodes_case2(now, m_scan, inbox_c)
        else:
            self._nodes_case3(now, m_scan, c_scan, inbox_m, inbox_c)
        # arbitration
        m_tw, m_ch = self.m_mux.select(now)
        c_tw, c_ch = self.c_mux.select(now)
        # world stepping
        for _ in range(int(round(CONTROL_DT / PHYSICS_DT))):
            if cfg.case_id in (2, 3):
                self.master.step(m_tw, PHYSICS_DT)
            else:
                self.master.step(Twist(), PHYSICS_DT)
            self.client.step(c_tw, PHYSICS_DT)
        self.m_traj.append((self.master.pose.x, self.master.pose.y))
        self.c_traj.append((self.client.pose.x, self.client.pose.y))
        self.transcript.append({
            "t": "tick", "k": self._k, "ts": round(now, 6),
            "m": [round(self.master.pose.x, 9), round(self.master.pose.y, 9),
                  round(self.master.pose.theta, 9), m_ch or "",
                  round(m_tw.v, 9), round(m_tw.w, 9)],
            "c": [round(self.client.pose.x, 9), round(self.client.pose.y, 9),
                  round(self.client.pose.theta, 9), c_ch or "",
                  round(c_tw.v, 9), round(c_tw.w, 9)],
            "fmax": round(self.last_fmax, 9),
        })
        self._k += 1
        now = self._k * CONTROL_DT
        # termination
        if self.master.collision or self.client.collision:
            self.end_reason = "collision"
            self._ended = True
            return False
        if self.reach_time is not None and self._drain_until is None:
            self._drain_until = self.reach_time + DRAIN_S
        if self._drain_until is not None and now >= self._drain_until:
            self.end_reason = "reached"
            self._ended = True
            return False
        return True

    def finish(self) -> TrialMetrics:
        if self.end_reason == "timeout" and self.reach_time is not None:
            self.end_reason = "reached"
        return self._finish(self._k * CONTROL_DT)

    def run(self) -> TrialMetrics:
        while self.step():
            pass
        return self.finish()

    def _finish(self, duration: float) -> TrialMetrics:
        cfg = self.cfg
        collided = self.master.collision or self.client.collision
        reached = self.reach_time is not None and not collided
        client_tp = master_tp = client_loss = master_loss = 0.0
        latency = 0.0
        if self.link is not None:
            # flush in-flight messages so sent = delivered + dropped exactly
            flush_t = duration + 1.0
            self.link.poll(MASTER, flush_t)
            self.link.poll(CLIENT, flush_t)
            st = self.link.stats
            denom = duration if duration > 0.0 else 1.0
            client_tp = 8.0 * (st.c2m.bytes_sent + st.m2c.bytes_delivered) / denom
            master_tp = 8.0 * (st.m2c.bytes_sent + st.c2m.bytes_delivered) / denom
            client_loss = 8.0 * (st.c2m.bytes_sent - st.c2m.bytes_delivered) / denom
            master_loss = 8.0 * (st.m2c.bytes_sent - st.m2c.bytes_delivered) / denom
            latency = st.latency_avg()
        metrics = TrialMetrics(
            case_id=cfg.case_id, scenario_id=cfg.scenario_id,
            goal=cfg.goal, seed=cfg.seed,
            reached=reached, collision=collided, end_reason=self.end_reason,
            duration_s=round(duration, 6),
            efficiency_s=round(self.reach_time if self.reach_time is not None else duration, 6),
            goal_error_m=round(goal_error(self.client.pose, self.c_start, cfg.goal), 9),
            tracking_error_m=round(tracking_error(
                np.asarray(self.m_traj), np.asarray(self.c_traj),
                self.m_start, self.c_start) if cfg.case_id in (2, 3) else 0.0, 9),
            client_throughput_bps=round(client_tp, 3),
            master_throughput_bps=round(master_tp, 3),
            client_loss_bps=round(client_loss, 3),
            master_loss_bps=round(master_loss, 3),
            latency_avg_s=round(latency, 9),
            compute={"master": self.m_ledger.to_dict(),
                     "client": self.c_ledger.to_dict()},
        )
        self.transcript.append({"t": "end", "reason": self.end_reason,
                                "metrics": metrics.to_dict()})
        return metrics


def run_trial(cfg: CaseConfig, console=None) -> tuple[TrialMetrics, list[dict]]:
    """Run one trial to completion; returns the metrics and the transcript."""
    t = Trial(cfg, console=console)
    metrics = t.run()
    return metrics, t.transcript


def transcript_lines(transcript: list[dict]) -> list[str]:
    return [json.dumps(rec, separators=(",", ":")) for rec in transcript]
