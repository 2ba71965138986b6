"""Network link between the master and client stacks.

The simulated backend delivers newline-delimited JSON messages with a seeded
delay/jitter/loss model so whole trials replay byte-for-byte. A thin TCP
backend speaks the same wire format for live two-process demos.

Wire schemas (field order is part of the format):
  twist  {"t":"twist","ch":c,"v":f,"vy":f,"w":f,"ts":f,"seq":n}
  odom   {"t":"odom","x":f,"y":f,"th":f,"v":f,"w":f,"ts":f,"seq":n}
  scan   {"t":"scan","amin":f,"ainc":f,"rmax":f,"r":[f,...],"ts":f,"seq":n}
  fb     {"t":"fb","vr":f,"wr":f,"fmax":f,"ts":f,"seq":n}
  ping   {"t":"ping","id":n,"ts":f}      pong {"t":"pong","id":n,"ts":f}
  goal   {"t":"goal","x":f,"y":f}
  status {"t":"status","mode":m,"ts":f}
"""
from __future__ import annotations

import heapq
import json
import queue
import random
import socket
import threading
from dataclasses import dataclass, field

import numpy as np

MASTER = "m"
CLIENT = "c"

_SEQ_KINDS = {"twist", "odom", "scan", "fb"}


def encode(msg: dict) -> bytes:
    return (json.dumps(msg, separators=(",", ":")) + "\n").encode("utf-8")


def decode(line: bytes) -> dict:
    return json.loads(line.decode("utf-8"))


def make_twist(ch: str, v: float, vy: float, w: float, ts: float) -> dict:
    return {"t": "twist", "ch": ch, "v": v, "vy": vy, "w": w, "ts": ts, "seq": 0}


def make_odom(x: float, y: float, th: float, v: float, w: float, ts: float) -> dict:
    return {"t": "odom", "x": x, "y": y, "th": th, "v": v, "w": w, "ts": ts, "seq": 0}


def make_scan(amin: float, ainc: float, rmax: float, ranges, ts: float) -> dict:
    r = [round(float(x), 3) for x in np.asarray(ranges)]
    return {"t": "scan", "amin": amin, "ainc": ainc, "rmax": rmax, "r": r,
            "ts": ts, "seq": 0}


def make_fb(vr: float, wr: float, fmax: float, ts: float) -> dict:
    return {"t": "fb", "vr": vr, "wr": wr, "fmax": fmax, "ts": ts, "seq": 0}


def make_goal(x: float, y: float) -> dict:
    return {"t": "goal", "x": x, "y": y}


def make_status(mode: str, ts: float) -> dict:
    return {"t": "status", "mode": mode, "ts": ts}


@dataclass
class LinkConfig:
    base_delay: float = 0.010
    jitter: float = 0.002   # stddev of the Gaussian delay term, 0 disables it
    loss_prob: float = 0.0
    seed: int = 0


@dataclass
class DirStats:
    msgs_sent: int = 0
    bytes_sent: int = 0
    msgs_delivered: int = 0
    bytes_delivered: int = 0
    msgs_dropped: int = 0
    bytes_dropped: int = 0


@dataclass
class LinkStats:
    m2c: DirStats = field(default_factory=DirStats)
    c2m: DirStats = field(default_factory=DirStats)
    latency_samples: list[float] = field(default_factory=list)

    def direction(self, side_from: str) -> DirStats:
        return self.m2c if side_from == MASTER else self.c2m

    def latency_avg(self) -> float:
        if not self.latency_samples:
            return 0.0
        return sum(self.latency_samples) / len(self.latency_samples)


def _topic(msg: dict) -> tuple:
    if msg["t"] == "twist":
        return ("twist", msg["ch"])
    return (msg["t"],)


class SimulatedLink:
    """Deterministic in-process message channel between the two sides."""

    def __init__(self, cfg: LinkConfig | None = None):
        self.cfg = cfg or LinkConfig()
        self.rng = random.Random(self.cfg.seed)
        self.stats = LinkStats()
        self._queues: dict[str, list] = {MASTER: [], CLIENT: []}
        self._enq = 0
        self._seq: dict[tuple, int] = {}
        self._last_delivery: dict[tuple, float] = {}
        self._pending_pings: dict[int, float] = {}
        self._ping_id = 0
        self._clock_hwm = 0.0

    def _next_seq(self, side: str, topic: tuple) -> int:
        key = (side, topic)
        n = self._seq.get(key, 0)
        self._seq[key] = n + 1
        return n

    def _delay(self) -> float:
        d = self.cfg.base_delay
        if self.cfg.jitter > 0.0:
            d += self.rng.gauss(0.0, self.cfg.jitter)
        return max(d, 0.0)

    def _enqueue(self, side_from: str, msg: dict, now: float) -> float | None:
        """Serialize, account, and schedule one message. Returns the delivery
        time, or None when the loss draw eats it."""
        topic = _topic(msg)
        if msg["t"] in _SEQ_KINDS:
            msg = dict(msg)
            msg["seq"] = self._next_seq(side_from, topic)
        wire = encode(msg)
        d = self.stats.direction(side_from)
        d.msgs_sent += 1
        d.bytes_sent += len(wire)
        self._clock_hwm = max(self._clock_hwm, now)
        if self.cfg.loss_prob > 0.0 and self.rng.random() < self.cfg.loss_prob:
            d.msgs_dropped += 1
            d.bytes_dropped += len(wire)
            return None
        deliver = now + self._delay()
        key = (side_from,) + topic
        deliver = max(deliver, self._last_delivery.get(key, 0.0))
        self._last_delivery[key] = deliver
        to = CLIENT if side_from == MASTER else MASTER
        self._enq += 1
        heapq.heappush(self._queues[to], (deliver, self._enq, len(wire), msg))
        return deliver

    def send(self, side_from: str, msg: dict, now: float) -> None:
        self._enqueue(side_from, msg, now)

    def send_ping(self, side_from: str, now: float) -> None:
        """Fire one echo probe; the peer answers at delivery time."""
        self._ping_id += 1
        pid = self._ping_id
        ping = {"t": "ping", "id": pid, "ts": now}
        deliver = self._enqueue(side_from, ping, now)
        if deliver is None:
            return
        self._pending_pings[pid] = now
        peer = CLIENT if side_from == MASTER else MASTER
        pong = {"t": "pong", "id": pid, "ts": deliver}
        self._enqueue(peer, pong, deliver)

    def poll(self, side: str, now: float) -> list[dict]:
        """All messages due at `side` by `now`, in delivery order."""
        q = self._queues[side]
        out = []
        sender = CLIENT if side == MASTER else MASTER
        d = self.stats.direction(sender)
        while q and q[0][0] <= now:
            deliver, _, nbytes, msg = heapq.heappop(q)
            d.msgs_delivered += 1
            d.bytes_delivered += nbytes
            if msg["t"] == "pong":
                sent = self._pending_pings.pop(msg["id"], None)
                if sent is not None:
                    self.stats.latency_samples.append((deliver - sent) / 2.0)
            out.append(msg)
        self._clock_hwm = max(self._clock_hwm, now)
        return out

    def pending(self, side: str) -> int:
        return len(self._queues[side])

    def window_stats(self, window: float) -> LinkStats:
        if window <= 0.0:
            raise ValueError("window must be positive")
        if window > self._clock_hwm + 1e-9:
            raise ValueError("window longer than the observed trial time")
        return self.stats


class SocketEndpoint:
    """One side of a TCP link speaking newline-delimited JSON.

    The server side binds and waits for a single peer; the client side
    connects. poll() drains whatever has arrived, so the call pattern matches
    SimulatedLink closely enough for demos.
    """

    def __init__(self, host: str = "127.0.0.1", port: int = 0, server: bool = False):
        self.server = server
        self._sock: socket.socket | None = None
        self._conn: socket.socket | None = None
        self._rx: queue.Queue = queue.Queue()
        self._reader: threading.Thread | None = None
        self.bytes_sent = 0
        self.bytes_received = 0
        self._closing = False
        if server:
            self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            self._sock.bind((host, port))
            self._sock.listen(1)
            self.addr = self._sock.getsockname()
        else:
            self.addr = (host, port)

    def start(self) -> None:
        if self.server:
            conn, _ = self._sock.accept()
            self._conn = conn
        else:
            self._conn = socket.create_connection(self.addr, timeout=10.0)
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._reader.start()

    def _read_loop(self) -> None:
        buf = b""
        try:
            while not self._closing:
                chunk = self._conn.recv(65536)
                if not chunk:
                    break
                buf += chunk
                while b"\n" in buf:
                    line, buf = buf.split(b"\n", 1)
                    if line:
                        self.bytes_received += len(line) + 1
                        self._rx.put(decode(line + b"\n"))
        except OSError:
            pass

    def send(self, msg: dict) -> None:
        wire = encode(msg)
        self.bytes_sent += len(wire)
        self._conn.sendall(wire)

    def poll(self) -> list[dict]:
        out = []
        while True:
            try:
                out.append(self._rx.get_nowait())
            except queue.Empty:
                return out

    def close(self) -> None:
        self._closing = True
        for s in (self._conn, self._sock):
            if s is not None:
                try:
                    s.shutdown(socket.SHUT_RDWR)
                except OSError:
                    pass
                try:
                    s.close()
                except OSError:
                    pass
