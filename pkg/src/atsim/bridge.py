"""Live operator bridge.

Hosts one console-driven trial over a WebSocket endpoint. The trial runs in
its own thread, paced to the wall clock at the control rate, and starts when
the first operator connects. One operator at a time: extra connections are
refused. Inbound operator messages are queued and drained at tick boundaries;
if the operator stops sending, the master's drive channel simply goes stale
and the multiplexer zeroes the robot within its timeout.

Frames (one JSON object per WebSocket message):
  server -> console   {"t":"hello", ...}   once, config and room geometry
                      {"t":"view", ...}    every control tick
                      {"t":"end","metrics":{...}}
                      {"t":"error","reason":...}
  console -> server   {"t":"teleop","v":f,"w":f}
                      {"t":"confirm_goal"}
"""
from __future__ import annotations

import json
import math
import threading
import time

from websockets.sync.server import serve
from websockets.exceptions import ConnectionClosed

from .force import compute_force
from .geometry import Twist
from .supervisor import CONTROL_DT, CaseConfig, Trial


class ConsoleGateway:
    """Thread-safe funnel from the socket handler into the trial loop."""

    def __init__(self, limits):
        self._lock = threading.Lock()
        self._pending: list[tuple[Twist | None, bool]] = []
        self._limits = limits

    def push_teleop(self, v: float, w: float) -> None:
        lim = self._limits
        tw = Twist(max(-lim.v_max, min(v, lim.v_max)), 0.0,
                   max(-lim.w_max, min(w, lim.w_max)))
        with self._lock:
            self._pending.append((tw, False))

    def push_confirm(self) -> None:
        with self._lock:
            self._pending.append((None, True))

    def drain(self, now: float) -> list[tuple[Twist | None, bool]]:
        with self._lock:
            out = self._pending
            self._pending = []
        return out


def _hello_frame(cfg: CaseConfig, trial: Trial) -> dict:
    spec = trial.master.spec
    scan_meta = {"amin": -math.pi, "ainc": 2.0 * math.pi / 360.0,
                 "rmax": 5.0, "n": 360}
    return {
        "t": "hello",
        "case": cfg.case_id,
        "scenario": cfg.scenario_id,
        "f_th": cfg.force.f_th,
        "v_max": cfg.nav_limits.v_max,
        "w_max": cfg.nav_limits.w_max,
        "goal": [round(trial.m_goal[0], 6), round(trial.m_goal[1], 6)],
        "room": spec.to_dict(),
        "scan_meta": scan_meta,
    }


class Bridge:
    def __init__(self, cfg: CaseConfig, port: int, host: str = "127.0.0.1"):
        cfg.validate()
        if cfg.teleop_source != "console":
            raise ValueError("bridge needs teleop_source = console")
        self.cfg = cfg
        self.gateway = ConsoleGateway(cfg.nav_limits)
        self.trial = Trial(cfg, console=self.gateway)
        self.host = host
        self.port = port
        self._op_lock = threading.Lock()
        self._operator = None
        self._started = threading.Event()
        self._server = None
        self.final_metrics = None

    # ---- socket side ------------------------------------------------------

    def _handler(self, conn) -> None:
        with self._op_lock:
            if self._operator is not None:
                try:
                    conn.send(json.dumps({"t": "error",
                                          "reason": "console already connected"}))
                finally:
                    conn.close()
                return
            self._operator = conn
        try:
            conn.send(json.dumps(_hello_frame(self.cfg, self.trial)))
            self._started.set()
            for raw in conn:
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    continue
                kind = msg.get("t")
                if kind == "teleop":
                    self.gateway.push_teleop(float(msg.get("v", 0.0)),
                                             float(msg.get("w", 0.0)))
                elif kind == "confirm_goal":
                    self.gateway.push_confirm()
        except ConnectionClosed:
            pass
        finally:
            with self._op_lock:
                if self._operator is conn:
                    self._operator = None

    def _send_to_operator(self, frame: dict) -> None:
        with self._op_lock:
            conn = self._operator
        if conn is None:
            return
        try:
            conn.send(json.dumps(frame))
        except ConnectionClosed:
            pass

    # ---- trial side -------------------------------------------------------

    def _view_frame(self, now: float) -> dict:
        trial = self.trial
        pose = trial.master.pose
        lt = trial.master.last_twist
        scan = trial.last_m_scan
        fmax = trial.last_fmax
        ranges: list[float] = []
        if scan is not None:
            ranges = [round(float(r), 3) for r in scan.ranges]
            field = compute_force(scan.bearings(), scan.ranges, self.cfg.force, now)
            fmax = max(fmax, field.max_f)
        gd = math.hypot(trial.m_goal[0] - pose.x, trial.m_goal[1] - pose.y)
        metrics = {"elapsed": round(now, 3),
                   "goal_dist": round(gd, 3),
                   "reached": trial.reach_time is not None}
        if trial.link is not None:
            st = trial.link.stats
            denom = max(now, CONTROL_DT)
            metrics["client_tp"] = round(
                8.0 * (st.c2m.bytes_sent + st.m2c.bytes_delivered) / denom, 1)
            metrics["latency_avg"] = round(st.latency_avg(), 6)
        return {"t": "view", "ts": round(now, 3),
                "master_pose": {"x": round(pose.x, 6), "y": round(pose.y, 6),
                                "th": round(pose.theta, 6)},
                "master_twist": [round(lt.v, 6), round(lt.w, 6)],
                "scan": ranges,
                "fmax": round(fmax, 6),
                "metrics": metrics}

    def _trial_loop(self) -> None:
        self._started.wait()
        t0 = time.monotonic()
        k = 0
        while True:
            target = t0 + k * CONTROL_DT
            delay = target - time.monotonic()
            if delay > 0:
                time.sleep(delay)
            alive = self.trial.step()
            now = k * CONTROL_DT
            self._send_to_operator(self._view_frame(now))
            k += 1
            if not alive:
                break
        self.final_metrics = self.trial.finish()
        self._send_to_operator({"t": "end",
                                "metrics": self.final_metrics.to_dict()})
        time.sleep(0.2)  # let the frame flush before tearing down
        with self._op_lock:
            conn = self._operator
        if conn is not None:
            try:
                conn.close()
            except Exception:
                pass
        if self._server is not None:
            self._server.shutdown()

    def serve_forever(self) -> None:
        with serve(self._handler, self.host, self.port) as server:
            self._server = server
            worker = threading.Thread(target=self._trial_loop, daemon=True)
            worker.start()
            print(f"listening ws://{self.host}:{self.port}", flush=True)
            server.serve_forever()


def serve_bridge(cfg: CaseConfig, port: int, host: str = "127.0.0.1") -> int:
    bridge = Bridge(cfg, port, host)
    try:
        bridge.serve_forever()
    except KeyboardInterrupt:
        return 0
    m = bridge.final_metrics
    if m is not None:
        print(f"trial ended: {m.end_reason}, goal_error={m.goal_error_m:.3f} m")
    return 0
