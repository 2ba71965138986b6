"""Priority multiplexer for velocity commands.

Several sources publish twists onto named channels; each control tick the
highest-priority channel with a non-expired message drives the robot. When
everything has expired the output is a zero twist, which is the failsafe.
"""
from __future__ import annotations

from dataclasses import dataclass

from .geometry import Twist

# Stamps arrive as float multiples of the control period, so an age that is
# nominally equal to the timeout can land one ulp on either side of it; the
# slack keeps the expiry boundary from flipping on that rounding noise.
STALE_TOL = 1e-9


@dataclass
class Channel:
    name: str
    priority: int
    timeout: float
    twist: Twist | None = None
    stamp: float = float("-inf")


class VelocityMux:
    def __init__(self):
        self._channels: dict[str, Channel] = {}
        self._order: list[str] = []

    @classmethod
    def from_config(cls, cfg: dict) -> "VelocityMux":
        """Build from {"channels": [{"name", "priority", "timeout"}, ...]}."""
        mux = cls()
        for ch in cfg["channels"]:
            mux.register(ch["name"], int(ch["priority"]), float(ch["timeout"]))
        return mux

    def register(self, name: str, priority: int, timeout: float) -> None:
        if name in self._channels:
            raise ValueError(f"channel {name!r} already registered")
        if timeout <= 0.0:
            raise ValueError("timeout must be positive")
        self._channels[name] = Channel(name, priority, timeout)
        self._order.append(name)

    def publish(self, name: str, twist: Twist, stamp: float) -> None:
        ch = self._channels.get(name)
        if ch is None:
            raise KeyError(f"unknown channel {name!r}")
        if stamp < ch.stamp:
            raise ValueError(f"stamp regression on {name!r}: {stamp} < {ch.stamp}")
        ch.twist = twist
        ch.stamp = stamp

    def select(self, now: float) -> tuple[Twist, str | None]:
        """Pick the winning twist at virtual time `now`.

        A message whose age equals the channel timeout still counts as fresh;
        strictly older is expired. Priority ties go to the channel registered
        first.
        """
        best: Channel | None = None
        for name in self._order:
            ch = self._channels[name]
            if ch.twist is None or now - ch.stamp > ch.timeout + STALE_TOL:
                continue
            if best is None or ch.priority > best.priority:
                best = ch
        if best is None:
            return Twist(), None
        return best.twist, best.name

    def channels(self) -> list[Channel]:
        return [self._channels[n] for n in self._order]
