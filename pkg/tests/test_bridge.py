"""Operator bridge: socket protocol, drive path, stale-channel failsafe,
and single-operator policy. Each test talks to a live server on localhost."""
import contextlib
import json
import socket
import threading
import time

import pytest
from websockets.exceptions import ConnectionClosed
from websockets.sync.client import connect

from atsim import cli
from atsim.bridge import Bridge
from atsim.supervisor import CaseConfig

RECV_TIMEOUT = 10.0


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


def connect_retry(port, tries=100):
    last = None
    for _ in range(tries):
        try:
            return connect(f"ws://127.0.0.1:{port}", open_timeout=2)
        except OSError as e:
            last = e
            time.sleep(0.05)
    raise last


def recv_frame(conn):
    return json.loads(conn.recv(timeout=RECV_TIMEOUT))


def recv_until(conn, kind):
    """Read frames until one of the given kind arrives."""
    while True:
        frame = recv_frame(conn)
        if frame["t"] == kind:
            return frame


@contextlib.contextmanager
def live_bridge(**cfg_kw):
    cfg_kw.setdefault("case_id", 2)
    cfg_kw.setdefault("scenario_id", 1)
    cfg_kw.setdefault("teleop_source", "console")
    cfg = CaseConfig(**cfg_kw)
    port = free_port()
    bridge = Bridge(cfg, port)
    worker = threading.Thread(target=bridge.serve_forever, daemon=True)
    worker.start()
    try:
        yield bridge, port
    finally:
        with contextlib.suppress(Exception):
            if bridge._server is not None:
                bridge._server.shutdown()
        worker.join(timeout=5)


# ---- construction guards ----------------------------------------------------

def test_bridge_requires_console_source():
    with pytest.raises(ValueError):
        Bridge(CaseConfig(case_id=2), port=free_port())


def test_serve_rejects_autonomous_case(capsys):
    # validation runs before any socket is opened
    assert cli.main(["serve", "--case", "0"]) == cli.EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


# ---- live protocol ------------------------------------------------------------

def test_hello_views_drive_failsafe_confirm():
    with live_bridge(trial_timeout=60.0) as (bridge, port):
        cfg = bridge.cfg
        with connect_retry(port) as conn:
            hello = recv_frame(conn)
            assert hello["t"] == "hello"
            assert hello["case"] == 2 and hello["scenario"] == 1
            assert hello["f_th"] == cfg.force.f_th
            assert hello["v_max"] == cfg.nav_limits.v_max
            assert hello["w_max"] == cfg.nav_limits.w_max
            assert hello["scan_meta"]["n"] == 360
            assert hello["scan_meta"]["rmax"] == 5.0
            assert len(hello["goal"]) == 2
            room = hello["room"]
            assert room["width"] == 17.0 and room["height"] == 8.0
            assert "static_obstacles" in room

            # the view stream runs on the control-tick grid
            views = [recv_until(conn, "view") for _ in range(5)]
            stamps = [v["ts"] for v in views]
            diffs = [round(b - a, 6) for a, b in zip(stamps, stamps[1:])]
            assert all(d == 0.1 for d in diffs)
            for v in views:
                assert len(v["scan"]) == 360
                assert set(v["master_pose"]) == {"x", "y", "th"}
                assert "goal_dist" in v["metrics"]

            # drive forward; the executed twist follows within a few ticks
            driven = []
            for _ in range(10):
                conn.send(json.dumps({"t": "teleop", "v": 0.4, "w": 0.0}))
                driven.append(recv_until(conn, "view"))
            assert max(v["master_twist"][0] for v in driven) > 0.3

            # stop commanding: the drive channel goes stale and the base
            # zeroes within the channel timeout plus one tick
            last_sent = driven[-1]["ts"]
            while True:
                v = recv_until(conn, "view")
                if v["master_twist"] == [0.0, 0.0]:
                    assert v["ts"] - last_sent <= 0.55
                    break
                assert v["ts"] - last_sent <= 0.55

            conn.send(json.dumps({"t": "confirm_goal"}))
            end = recv_until(conn, "end")
            assert end["metrics"]["end_reason"] == "reached"
            assert end["metrics"]["reached"] is True
            with pytest.raises(ConnectionClosed):
                while True:
                    conn.recv(timeout=RECV_TIMEOUT)
    assert bridge.final_metrics is not None
    assert bridge.final_metrics.end_reason == "reached"


def test_second_console_refused_then_reattach():
    with live_bridge(trial_timeout=60.0) as (bridge, port):
        first = connect_retry(port)
        assert recv_frame(first)["t"] == "hello"

        second = connect_retry(port)
        refusal = recv_frame(second)
        assert refusal["t"] == "error"
        assert "connected" in refusal["reason"]
        with pytest.raises(ConnectionClosed):
            second.recv(timeout=RECV_TIMEOUT)

        # the slot frees when the operator drops; a newcomer gets the
        # handshake and the live stream mid-trial
        first.close()
        deadline = time.monotonic() + 5.0
        while True:
            third = connect_retry(port)
            frame = recv_frame(third)
            if frame["t"] == "hello":
                break
            third.close()
            assert time.monotonic() < deadline
            time.sleep(0.05)
        view = recv_until(third, "view")
        assert view["ts"] > 0.0
        third.send(json.dumps({"t": "confirm_goal"}))
        recv_until(third, "end")
        third.close()


def test_malformed_operator_frames_ignored():
    with live_bridge(trial_timeout=60.0) as (bridge, port):
        with connect_retry(port) as conn:
            recv_until(conn, "hello")
            conn.send("not json at all")
            conn.send(json.dumps({"t": "unknown_kind", "x": 1}))
            # stream keeps flowing
            v1 = recv_until(conn, "view")
            v2 = recv_until(conn, "view")
            assert v2["ts"] > v1["ts"]
            conn.send(json.dumps({"t": "confirm_goal"}))
            recv_until(conn, "end")
