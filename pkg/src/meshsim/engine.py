"""Deterministic discrete-event core: clock, priority event queue, seeded RNG streams."""

from __future__ import annotations

import hashlib
import heapq
import random
from typing import Any, Callable

# Event payload kinds carried in the queue.  Arrivals are split by packet
# kind so handlers dispatch on a single int compare.
EV_QUERY_ARRIVAL = 0
EV_REPLY_ARRIVAL = 1
EV_DATA_ARRIVAL = 2
EV_WAYPOINT = 3
EV_QUERY_ORIGIN = 4
EV_DATA_ORIGIN = 5
EV_SIM_END = 6

EVENT_NAMES = {
    EV_QUERY_ARRIVAL: "query_arrival",
    EV_REPLY_ARRIVAL: "reply_arrival",
    EV_DATA_ARRIVAL: "data_arrival",
    EV_WAYPOINT: "waypoint",
    EV_QUERY_ORIGIN: "query_origin",
    EV_DATA_ORIGIN: "data_origin",
    EV_SIM_END: "sim_end",
}


class SchedulingError(Exception):
    """An event was scheduled before the current clock."""


class Engine:
    """Single-threaded event loop with a (fire_at, insertion sequence) total order.

    Tie-breaking by insertion sequence makes the order total and replayable;
    two runs that schedule the same events in the same order process them
    identically.
    """

    __slots__ = ("now", "handler", "_heap", "_next_seq", "processed")

    def __init__(self, handler: Callable[[float, int, int, Any], None] | None = None):
        self.now = 0.0
        self.handler = handler
        self._heap: list[tuple[float, int, int, int, Any]] = []
        self._next_seq = 0
        self.processed = 0

    def schedule(self, fire_at: float, kind: int, node: int = 0, payload: Any = None) -> int:
        """Queue an event; returns its insertion sequence (the event handle)."""
        if fire_at < self.now:
            raise SchedulingError(
                f"cannot schedule event at t={fire_at!r} before current clock t={self.now!r}"
            )
        seq = self._next_seq
        self._next_seq = seq + 1
        heapq.heappush(self._heap, (fire_at, seq, kind, node, payload))
        return seq

    def pending(self) -> int:
        return len(self._heap)

    def run_until(self, t_end: float) -> int:
        """Process every event with fire_at <= t_end in queue order; returns the count.

        The clock follows each processed event and lands on t_end afterwards.
        """
        if t_end < self.now:
            raise SchedulingError(f"run_until({t_end!r}) is before current clock t={self.now!r}")
        handler = self.handler
        heap = self._heap
        pop = heapq.heappop
        count = 0
        while heap and heap[0][0] <= t_end:
            fire_at, _seq, kind, node, payload = pop(heap)
            self.now = fire_at
            handler(fire_at, kind, node, payload)
            count += 1
        self.now = t_end
        self.processed += count
        return count


def _derive_seed(seed: int, name: str) -> int:
    """Stable 64-bit sub-seed for a named stream; identical across platforms."""
    digest = hashlib.blake2b(f"{seed}:{name}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class RngStream:
    """One named pseudo-random stream; (seed, name) fully determines the draws."""

    __slots__ = ("seed", "name", "_rng")

    def __init__(self, seed: int, name: str):
        self.seed = seed
        self.name = name
        self._rng = random.Random(_derive_seed(seed, name))

    def uniform(self, lo: float, hi: float) -> float:
        """Draw from [lo, hi); the degenerate lo == hi returns lo."""
        if lo > hi:
            raise ValueError(f"uniform bounds out of order: lo={lo!r} > hi={hi!r}")
        return lo + (hi - lo) * self._rng.random()

    def random(self) -> float:
        return self._rng.random()

    def sample(self, population, k):
        return self._rng.sample(population, k)


class RngStreams:
    """Registry of independent named streams sharing one experiment seed.

    Each concern (mobility, jitter, placement, traffic, attack) draws from its
    own stream so that changing one concern's consumption cannot perturb the
    others.  Mobility is further split per node: waypoint event order depends
    on positions, and a shared stream would leak that order into other nodes'
    draws, breaking paired placement comparisons.
    """

    __slots__ = ("seed", "_streams")

    def __init__(self, seed: int):
        self.seed = seed
        self._streams: dict[str, RngStream] = {}

    def get(self, name: str, index: int | None = None) -> RngStream:
        key = name if index is None else f"{name}/{index}"
        stream = self._streams.get(key)
        if stream is None:
            stream = RngStream(self.seed, key)
            self._streams[key] = stream
        return stream
