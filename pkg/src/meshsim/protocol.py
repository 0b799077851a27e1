"""Mesh multicast state machine: flooded queries, reverse-path replies, group relay.

Route discovery is a periodic flood: the sender broadcasts a join query per
round, every node forwards only the first copy it hears (recording who handed
it over as its upstream), and receivers answer with a join reply that walks
the recorded upstream chain back to the sender, setting the forwarding-group
flag on every hop it names.  Data packets are then relayed by forwarding-group
members only.  Whoever wins the first-copy race therefore owns the mesh for
that round, which is precisely the surface the rushing attacker exploits.
"""

from __future__ import annotations

from dataclasses import dataclass

from .adversary import AttackKind, AttackProfile
from .engine import EV_DATA_ARRIVAL, EV_DATA_ORIGIN, EV_QUERY_ARRIVAL, EV_QUERY_ORIGIN, EV_REPLY_ARRIVAL


@dataclass(slots=True)
class JoinQuery:
    source: int
    seq: int
    prev_hop: int
    hop_record: tuple[int, ...]


@dataclass(slots=True)
class JoinReply:
    source: int
    seq: int
    receiver: int
    next_hop: int
    hop_record: tuple[int, ...]


@dataclass(slots=True)
class DataPacket:
    source: int
    session_seq: int
    origin_time: float
    hop_record: tuple[int, ...]


class NodeState:
    """Per-node protocol state: duplicate caches, upstream table, group flag."""

    __slots__ = ("node_id", "is_receiver", "attack", "query_seen", "data_seen", "upstream", "fg_expiry")

    def __init__(self, node_id: int, is_receiver: bool, attack: AttackProfile | None):
        self.node_id = node_id
        self.is_receiver = is_receiver
        self.attack = attack
        self.query_seen: set[tuple[int, int]] = set()
        self.data_seen: set[tuple[int, int]] = set()
        self.upstream: dict[tuple[int, int], int] = {}
        self.fg_expiry = -1.0

    def fg_live(self, at: float) -> bool:
        return at < self.fg_expiry


class MeshProtocol:
    """Handlers for all protocol events of one simulation run.

    Owned by the single-threaded event loop; every method is invoked with the
    clock already advanced to the event's fire time.
    """

    def __init__(
        self,
        engine,
        world,
        trace,
        sender: int,
        receivers: tuple[int, ...],
        attacks: dict[int, AttackProfile],
        jitter,
        attack_rng,
        refresh_interval: float,
        fg_lifetime: float,
        data_rate: float,
    ):
        self.engine = engine
        self.world = world
        self.trace = trace
        self.sender = sender
        self.receivers = receivers
        self.jitter = jitter
        self.attack_rng = attack_rng
        self.refresh_interval = refresh_interval
        self.fg_lifetime = fg_lifetime
        self.data_rate = data_rate
        self.proc_lo = world.radio.proc_delay_lo
        self.proc_hi = world.radio.proc_delay_hi
        self.ctrl_bits = world.radio.ctrl_packet_bits
        self.data_bits = world.radio.data_packet_bits
        receiver_set = set(receivers)
        self.nodes = [
            NodeState(i, i in receiver_set, attacks.get(i)) for i in range(world.n_nodes)
        ]

    # -- route discovery ---------------------------------------------------

    def originate_query(self, round_no: int, at: float) -> None:
        """Flood one discovery round and book the next one a refresh later."""
        trace = self.trace
        trace.rounds.append(at)
        trace.upstream_by_round[round_no] = {}
        self.nodes[self.sender].query_seen.add((self.sender, round_no))
        pkt = JoinQuery(self.sender, round_no, self.sender, (self.sender,))
        self.world.broadcast(EV_QUERY_ARRIVAL, pkt, self.sender, at, 0.0, self.ctrl_bits)
        trace.tx_query += 1
        self.engine.schedule(at + self.refresh_interval, EV_QUERY_ORIGIN, round_no + 1)

    def handle_query(self, node: int, pkt: JoinQuery, at: float) -> None:
        state = self.nodes[node]
        key = (pkt.source, pkt.seq)
        if key in state.query_seen:
            self.trace.drops_duplicate_query += 1
            return
        state.query_seen.add(key)
        state.upstream[key] = pkt.prev_hop
        self.trace.upstream_by_round[pkt.seq][node] = pkt.prev_hop

        attack = state.attack
        if attack is not None and attack.kind is AttackKind.NEIGHBOR:
            # Forwarded verbatim: downstream nodes record an upstream that is
            # not actually the node they heard, possibly not even in range.
            forwarded = pkt
            delay = self.jitter.uniform(self.proc_lo, self.proc_hi)
        else:
            forwarded = JoinQuery(pkt.source, pkt.seq, node, pkt.hop_record + (node,))
            if attack is not None and attack.rushes_control:
                delay = attack.rush_delay
            else:
                delay = self.jitter.uniform(self.proc_lo, self.proc_hi)
        self.world.broadcast(EV_QUERY_ARRIVAL, forwarded, node, at, delay, self.ctrl_bits)
        self.trace.tx_query += 1

        if state.is_receiver:
            reply = JoinReply(pkt.source, pkt.seq, node, pkt.prev_hop, (node,))
            reply_delay = self.jitter.uniform(self.proc_lo, self.proc_hi)
            self.world.broadcast(EV_REPLY_ARRIVAL, reply, node, at, reply_delay, self.ctrl_bits)
            self.trace.tx_reply += 1
            self.trace.reply_relays.append((at, node, pkt.seq, node, pkt.prev_hop))

    def handle_reply(self, node: int, pkt: JoinReply, at: float) -> None:
        if pkt.next_hop != node:
            return
        state = self.nodes[node]
        state.fg_expiry = at + self.fg_lifetime
        self.trace.fg_events.append((at, node, pkt.seq))
        if node == pkt.source:
            return  # chain complete
        upstream = state.upstream.get((pkt.source, pkt.seq))
        if upstream is None:
            self.trace.drops_stale_reply += 1
            return
        relay = JoinReply(pkt.source, pkt.seq, pkt.receiver, upstream, pkt.hop_record + (node,))
        attack = state.attack
        if attack is not None and attack.rushes_control:
            delay = attack.rush_delay
        else:
            delay = self.jitter.uniform(self.proc_lo, self.proc_hi)
        self.world.broadcast(EV_REPLY_ARRIVAL, relay, node, at, delay, self.ctrl_bits)
        self.trace.tx_reply += 1
        self.trace.reply_relays.append((at, node, pkt.seq, pkt.receiver, upstream))

    # -- data plane ----------------------------------------------------------

    def originate_data(self, session_seq: int, at: float) -> None:
        trace = self.trace
        trace.data_origins.append(at)
        self.nodes[self.sender].data_seen.add((self.sender, session_seq))
        pkt = DataPacket(self.sender, session_seq, at, (self.sender,))
        delay = self.jitter.uniform(self.proc_lo, self.proc_hi)
        self.world.broadcast(EV_DATA_ARRIVAL, pkt, self.sender, at, delay, self.data_bits)
        trace.tx_data += 1
        if self.data_rate > 0:
            self.engine.schedule(at + 1.0 / self.data_rate, EV_DATA_ORIGIN, session_seq + 1)

    def forward_data(self, node: int, pkt: DataPacket, at: float) -> None:
        state = self.nodes[node]
        key = (pkt.source, pkt.session_seq)
        if key in state.data_seen:
            self.trace.drops_duplicate_data += 1
            return
        state.data_seen.add(key)
        if state.is_receiver:
            self.trace.deliveries.append(
                (node, pkt.source, pkt.session_seq, pkt.origin_time, at, pkt.hop_record)
            )
        if not (at < state.fg_expiry or node == self.sender):
            return  # plain nodes cache but never relay data
        attack = state.attack
        if attack is None:
            delay = self.jitter.uniform(self.proc_lo, self.proc_hi)
        else:
            kind = attack.kind
            if kind is AttackKind.BLACKHOLE:
                if self.attack_rng.random() < attack.drop_prob:
                    self.trace.drops_attacker += 1
                    return
                delay = self.jitter.uniform(self.proc_lo, self.proc_hi)
            elif kind is AttackKind.JELLYFISH:
                # The hold rides on top of normal processing: the packet is
                # parked for hold_delay beyond what a legitimate relay takes.
                delay = self.jitter.uniform(self.proc_lo, self.proc_hi) + attack.hold_delay
            elif kind is AttackKind.RUSHING and attack.rushes_data:
                delay = attack.rush_delay
            else:
                delay = self.jitter.uniform(self.proc_lo, self.proc_hi)
        relayed = DataPacket(pkt.source, pkt.session_seq, pkt.origin_time, pkt.hop_record + (node,))
        self.world.broadcast(EV_DATA_ARRIVAL, relayed, node, at, delay, self.data_bits)
        self.trace.tx_data += 1
