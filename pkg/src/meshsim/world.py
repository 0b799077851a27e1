"""Physical world model: random-waypoint motion and a unit-disk broadcast radio.

The radio abstracts the MAC away entirely: no collisions, no carrier sensing,
no retransmissions.  A transmission is a processing delay at the sender
followed by a deterministic serialization delay, after which every node
within range at send time receives one copy.  The timing race the adversary
exploits lives entirely in the processing-delay term.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Sequence

from .engine import EV_WAYPOINT, Engine, RngStreams


@dataclass(slots=True)
class RadioParams:
    """Unit-disk radio with a [proc_delay_lo, proc_delay_hi) forwarding jitter window."""

    radio_range: float = 250.0
    bitrate: float = 2_000_000.0
    proc_delay_lo: float = 0.005
    proc_delay_hi: float = 0.015
    ctrl_packet_bits: int = 512
    data_packet_bits: int = 4096

    def validate(self) -> None:
        if self.radio_range <= 0:
            raise ValueError(f"radio_range must be > 0, got {self.radio_range!r}")
        if self.bitrate <= 0:
            raise ValueError(f"bitrate must be > 0, got {self.bitrate!r}")
        if self.proc_delay_lo < 0 or self.proc_delay_lo > self.proc_delay_hi:
            raise ValueError(
                "processing-delay window must satisfy 0 <= proc_delay_lo <= proc_delay_hi, "
                f"got [{self.proc_delay_lo!r}, {self.proc_delay_hi!r}]"
            )

    def tx_delay(self, bits: int) -> float:
        return bits / self.bitrate


def _leg(x0: float, y0: float, x1: float, y1: float, speed: float, depart_at: float) -> tuple:
    """One waypoint leg as a flat tuple: (x0, y0, x1, y1, vx, vy, depart_at, arrive_at)."""
    dist = math.hypot(x1 - x0, y1 - y0)
    if speed > 0.0 and dist > 0.0:
        return (
            x0,
            y0,
            x1,
            y1,
            (x1 - x0) * speed / dist,
            (y1 - y0) * speed / dist,
            depart_at,
            depart_at + dist / speed,
        )
    return (x0, y0, x1, y1, 0.0, 0.0, depart_at, depart_at)


class World:
    """Node positions under random waypoint plus broadcast scheduling.

    Positions are drawn uniformly in the area; each node moves at the single
    configured speed with zero pause time.  With speed 0 the topology is
    static and neighbor sets are cached.
    """

    def __init__(
        self,
        engine: Engine,
        streams: RngStreams,
        width: float,
        height: float,
        n_nodes: int,
        speed: float,
        radio: RadioParams,
        positions: list[tuple[float, float]] | None = None,
    ):
        if width <= 0 or height <= 0:
            raise ValueError(f"area must have positive dimensions, got {width!r} x {height!r}")
        if n_nodes < 2:
            raise ValueError(f"need at least 2 nodes, got {n_nodes}")
        radio.validate()
        self.engine = engine
        self.streams = streams
        self.width = width
        self.height = height
        self.n_nodes = n_nodes
        self.speed = speed
        self.radio = radio
        self._range2 = radio.radio_range * radio.radio_range
        self._inv_bitrate = 1.0 / radio.bitrate

        if positions is None:
            positions = []
            for i in range(n_nodes):
                rng = streams.get("mobility", i)
                positions.append((rng.uniform(0.0, width), rng.uniform(0.0, height)))
        else:
            if len(positions) != n_nodes:
                raise ValueError(f"expected {n_nodes} positions, got {len(positions)}")
            for x, y in positions:
                if not (0.0 <= x <= width and 0.0 <= y <= height):
                    raise ValueError(f"position ({x!r}, {y!r}) outside area")
        # Until start_motion() every node sits still at its initial position.
        self._legs = [_leg(x, y, x, y, 0.0, 0.0) for x, y in positions]
        self._static = speed == 0.0
        self._static_neighbors: list[tuple[int, ...]] | None = None

    def set_position(self, node: int, x: float, y: float) -> None:
        """Relocate a node before motion starts (attacker placement hook)."""
        if not (0.0 <= x <= self.width and 0.0 <= y <= self.height):
            raise ValueError(f"position ({x!r}, {y!r}) outside area")
        self._legs[node] = _leg(x, y, x, y, 0.0, 0.0)
        self._static_neighbors = None

    def start_motion(self) -> None:
        """Draw each node's first waypoint leg and schedule its arrival."""
        if self._static:
            return
        for node in range(self.n_nodes):
            self._begin_leg(node, 0.0)

    def _begin_leg(self, node: int, now: float) -> None:
        rng = self.streams.get("mobility", node)
        x, y = self.position_at(node, now)
        new_leg = _leg(x, y, rng.uniform(0.0, self.width), rng.uniform(0.0, self.height), self.speed, now)
        self._legs[node] = new_leg
        self.engine.schedule(new_leg[7], EV_WAYPOINT, node)

    def handle_waypoint(self, node: int, now: float) -> None:
        """Waypoint reached: pick a fresh uniform destination with zero pause."""
        if now < self._legs[node][7]:
            return  # superseded leg; nothing to do
        self._begin_leg(node, now)

    def position_at(self, node: int, t: float) -> tuple[float, float]:
        """Position on the node's current leg, clamped at the destination."""
        x0, y0, x1, y1, vx, vy, depart_at, arrive_at = self._legs[node]
        if t >= arrive_at:
            return (x1, y1)
        dt = t - depart_at
        return (x0 + vx * dt, y0 + vy * dt)

    def neighbors(self, node: int, t: float) -> Sequence[int]:
        """Nodes within radio range of `node` at time t (closed disk), ascending id."""
        if self._static:
            cache = self._static_neighbors
            if cache is None:
                cache = self._compute_static_neighbors()
            return cache[node]
        legs = self._legs
        x0, y0, x1, y1, vx, vy, depart_at, arrive_at = legs[node]
        if t >= arrive_at:
            x, y = x1, y1
        else:
            dt = t - depart_at
            x = x0 + vx * dt
            y = y0 + vy * dt
        r2 = self._range2
        out = []
        append = out.append
        for other, (ox0, oy0, ox1, oy1, ovx, ovy, odep, oarr) in enumerate(legs):
            if t >= oarr:
                ox = ox1
                oy = oy1
            else:
                odt = t - odep
                ox = ox0 + ovx * odt
                oy = oy0 + ovy * odt
            dx = ox - x
            dy = oy - y
            if dx * dx + dy * dy <= r2 and other != node:
                append(other)
        return out

    def _compute_static_neighbors(self) -> list[tuple[int, ...]]:
        pts = [(leg[0], leg[1]) for leg in self._legs]
        r2 = self._range2
        cache = []
        for node, (x, y) in enumerate(pts):
            out = []
            for other, (ox, oy) in enumerate(pts):
                if other != node and (ox - x) ** 2 + (oy - y) ** 2 <= r2:
                    out.append(other)
            cache.append(tuple(out))
        self._static_neighbors = cache
        return cache

    def broadcast(
        self, kind: int, packet, sender: int, at: float, proc_delay: float, bits: int
    ) -> Sequence[int]:
        """Schedule one PacketArrival per neighbor at send time.

        The packet leaves the sender at `at + proc_delay`; all recipients get
        it one serialization delay later.  Receivers are evaluated against
        positions at send time: over sub-millisecond transmissions the extra
        displacement is micrometers, and one evaluation point keeps the event
        order deterministic.  Arrivals are scheduled in ascending node id so
        same-timestamp processing order is well defined.
        """
        if proc_delay < 0:
            raise ValueError(f"proc_delay must be >= 0, got {proc_delay!r}")
        send_time = at + proc_delay
        arrive_at = send_time + bits * self._inv_bitrate
        recipients = self.neighbors(sender, send_time)
        # Arrivals are pushed directly: arrive_at >= at == clock because both
        # delay terms are non-negative, so the schedule() past-check cannot fire.
        engine = self.engine
        heap = engine._heap
        seq = engine._next_seq
        push = heapq.heappush
        for node in recipients:
            push(heap, (arrive_at, seq, kind, node, packet))
            seq += 1
        engine._next_seq = seq
        return recipients
