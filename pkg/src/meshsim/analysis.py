"""Metrics over run traces, plus a static-topology earliest-arrival oracle.

The oracle answers, for a fixed graph and deterministic per-node forwarding
delays, which neighbor's flooded copy reaches each node first.  It exists as
an independent check on the event-driven simulator: on any static topology the
simulator's first-round upstream table must equal the oracle's predecessor map
exactly, pathological ties included.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from statistics import fmean


@dataclass
class RunTrace:
    """Append-only record of one simulation run.

    Deliveries are first unique copies per (receiver, packet); duplicates are
    counted, never logged.  Upstream tables and forwarding-group events are
    kept per discovery round so the attack-success accounting and the oracle
    cross-checks can replay them.
    """

    config: dict = field(default_factory=dict)
    n_nodes: int = 0
    sender: int = 0
    receivers: tuple[int, ...] = ()
    attackers: tuple[int, ...] = ()
    rounds: list[float] = field(default_factory=list)
    data_origins: list[float] = field(default_factory=list)
    # (receiver, source, session_seq, origin_time, arrival_time, hop_record)
    deliveries: list[tuple] = field(default_factory=list)
    # (time, node, round)
    fg_events: list[tuple] = field(default_factory=list)
    upstream_by_round: dict[int, dict[int, int]] = field(default_factory=dict)
    # (time, node, round, receiver, next_hop)
    reply_relays: list[tuple] = field(default_factory=list)
    tx_query: int = 0
    tx_reply: int = 0
    tx_data: int = 0
    drops_duplicate_query: int = 0
    drops_duplicate_data: int = 0
    drops_attacker: int = 0
    drops_stale_reply: int = 0
    processed_events: int = 0
    event_log: list[str] | None = None

    @property
    def drops_duplicate(self) -> int:
        return self.drops_duplicate_query + self.drops_duplicate_data

    def fg_by_round(self) -> dict[int, set[int]]:
        """Forwarding-group membership per round, as instated by that round's replies."""
        out: dict[int, set[int]] = {}
        for _at, node, seq in self.fg_events:
            out.setdefault(seq, set()).add(node)
        return out


@dataclass(slots=True)
class RunMetrics:
    """Scalar per-run results; ratios are 0 with defined=False when vacuous."""

    asr_fg: float
    asr_data: float
    pdr: float
    mean_delay: float
    asr_fg_defined: bool
    asr_data_defined: bool
    pdr_defined: bool
    mean_delay_defined: bool
    drops_attacker: int
    drops_duplicate: int
    drops_stale_reply: int


def attack_success_rate(trace: RunTrace) -> tuple[float, float, bool, bool]:
    """(asr_fg, asr_data, fg_defined, data_defined).

    asr_fg: fraction of discovery rounds in which at least one attacker was
    instated into the forwarding group by that round's replies.
    asr_data: fraction of unique deliveries whose hop record crossed an attacker.
    """
    attackers = set(trace.attackers)
    n_rounds = len(trace.rounds)
    if not attackers or n_rounds == 0:
        asr_fg = 0.0
        fg_defined = n_rounds > 0
    else:
        captured = {seq for _at, node, seq in trace.fg_events if node in attackers}
        asr_fg = len(captured) / n_rounds
        fg_defined = True
    n_deliveries = len(trace.deliveries)
    if n_deliveries == 0:
        return asr_fg, 0.0, fg_defined, False
    if not attackers:
        return asr_fg, 0.0, fg_defined, True
    hit = 0
    for _r, _s, _seq, _ot, _at, hop_record in trace.deliveries:
        if attackers.intersection(hop_record):
            hit += 1
    return asr_fg, hit / n_deliveries, fg_defined, True


def packet_delivery_ratio(trace: RunTrace) -> tuple[float, bool]:
    """Unique deliveries over packets originated times receiver count."""
    originated = len(trace.data_origins)
    denominator = originated * len(trace.receivers)
    if denominator == 0:
        return 0.0, False
    return len(trace.deliveries) / denominator, True


def mean_end_to_end_delay(trace: RunTrace) -> tuple[float, bool]:
    """Mean (arrival - origination) over first unique deliveries."""
    if not trace.deliveries:
        return 0.0, False
    return fmean(arrival - origin for _r, _s, _seq, origin, arrival, _h in trace.deliveries), True


def compute_metrics(trace: RunTrace) -> RunMetrics:
    asr_fg, asr_data, fg_def, data_def = attack_success_rate(trace)
    pdr, pdr_def = packet_delivery_ratio(trace)
    delay, delay_def = mean_end_to_end_delay(trace)
    return RunMetrics(
        asr_fg=asr_fg,
        asr_data=asr_data,
        pdr=pdr,
        mean_delay=delay,
        asr_fg_defined=fg_def,
        asr_data_defined=data_def,
        pdr_defined=pdr_def,
        mean_delay_defined=delay_def,
        drops_attacker=trace.drops_attacker,
        drops_duplicate=trace.drops_duplicate,
        drops_stale_reply=trace.drops_stale_reply,
    )


# -- earliest-arrival oracle -------------------------------------------------


@dataclass(slots=True)
class OracleResult:
    """Per-node earliest completion times and winning predecessors."""

    source: int
    arrival: dict[int, float]
    predecessor: dict[int, int | None]
    unreachable: frozenset[int]

    def chain(self, node: int) -> list[int]:
        """Predecessor chain from the source to `node`, inclusive."""
        if node in self.unreachable:
            raise ValueError(f"node {node} is unreachable from {self.source}")
        path = [node]
        while node != self.source:
            node = self.predecessor[node]
            path.append(node)
        path.reverse()
        return path

    def captured(self, receiver: int, attackers) -> bool:
        """True if any attacker sits on the receiver's predecessor chain."""
        return any(n in attackers for n in self.chain(receiver))


def earliest_arrival_oracle(
    adjacency: dict[int, list[int] | tuple[int, ...]],
    proc_delay: dict[int, float],
    tx_delay: float,
    source: int,
) -> OracleResult:
    """Race winners of a flood with per-node deterministic forwarding delays.

    A node's "arrival" is the instant it is ready to forward: the radio
    arrival of its first copy plus its own processing delay (the source
    contributes no processing term).  The predecessor is whoever sent that
    first copy.  Ties are broken exactly as the simulator's event queue breaks
    them: candidates are pushed in ascending node id the moment their sender
    is settled, and equal-time pops follow push order.  This mirrors the
    insertion-sequence tie rule of the event loop without sharing any of its
    machinery, so agreement between the two is a meaningful check.
    """
    counter = itertools.count()
    arrival: dict[int, float] = {source: 0.0}
    predecessor: dict[int, int | None] = {source: None}
    settled = {source}
    heap: list[tuple[float, int, int, int]] = []
    for nbr in sorted(adjacency[source]):
        heapq.heappush(heap, (tx_delay + proc_delay[nbr], next(counter), nbr, source))
    while heap:
        ready_at, _tie, node, via = heapq.heappop(heap)
        if node in settled:
            continue
        settled.add(node)
        arrival[node] = ready_at
        predecessor[node] = via
        for nbr in sorted(adjacency[node]):
            if nbr not in settled:
                heapq.heappush(heap, (ready_at + tx_delay + proc_delay[nbr], next(counter), nbr, node))
    unreachable = frozenset(adjacency) - settled
    return OracleResult(source, arrival, predecessor, unreachable)


def unit_disk_adjacency(
    positions: list[tuple[float, float]], radio_range: float
) -> dict[int, list[int]]:
    """Closed-disk adjacency over explicit positions, neighbor lists ascending."""
    n = len(positions)
    r2 = radio_range * radio_range
    adjacency: dict[int, list[int]] = {i: [] for i in range(n)}
    for i in range(n):
        xi, yi = positions[i]
        for j in range(i + 1, n):
            xj, yj = positions[j]
            if (xi - xj) ** 2 + (yi - yj) ** 2 <= r2:
                adjacency[i].append(j)
                adjacency[j].append(i)
    return adjacency


def is_connected(adjacency: dict[int, list[int]]) -> bool:
    if not adjacency:
        return True
    start = next(iter(adjacency))
    seen = {start}
    frontier = [start]
    while frontier:
        node = frontier.pop()
        for nbr in adjacency[node]:
            if nbr not in seen:
                seen.add(nbr)
                frontier.append(nbr)
    return len(seen) == len(adjacency)


def hop_chain_connected(
    hop_record: tuple[int, ...],
    receiver: int,
    positions: list[tuple[float, float]],
    radio_range: float,
) -> bool:
    """Whether a delivery's hop record is radio-feasible on a static topology."""
    r2 = radio_range * radio_range
    chain = list(hop_record) + [receiver]
    for a, b in zip(chain, chain[1:]):
        (xa, ya), (xb, yb) = positions[a], positions[b]
        if (xa - xb) ** 2 + (ya - yb) ** 2 > r2:
            return False
    return True
