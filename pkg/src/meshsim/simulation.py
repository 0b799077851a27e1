"""Assembly of one simulation run: roles, placement, event dispatch, trace."""

from __future__ import annotations

import dataclasses
from typing import TYPE_CHECKING

from .adversary import AttackKind, AttackProfile, Placement, place_attackers
from .analysis import RunTrace
from .engine import (
    EV_DATA_ARRIVAL,
    EV_DATA_ORIGIN,
    EV_QUERY_ARRIVAL,
    EV_QUERY_ORIGIN,
    EV_REPLY_ARRIVAL,
    EV_SIM_END,
    EV_WAYPOINT,
    Engine,
    RngStreams,
)
from .protocol import MeshProtocol
from .world import World

if TYPE_CHECKING:
    from .harness import ExperimentConfig


class Simulation:
    """One seeded run: fixed roles, a fresh world, and a single event loop.

    Node ids are assigned deterministically: 0 is the multicast sender, the
    next n_receivers ids are receivers, the following n_attackers ids are
    attackers, and the rest are plain relays.  `positions` pins the initial
    layout for scripted topologies (tests, validation); otherwise positions
    are drawn uniformly in the area.
    """

    def __init__(
        self,
        config: "ExperimentConfig",
        positions: list[tuple[float, float]] | None = None,
        record_events: bool = False,
    ):
        self.config = config
        self.engine = Engine(handler=self._dispatch)
        self.streams = RngStreams(config.seed)
        radio = config.radio_params()
        self.world = World(
            self.engine,
            self.streams,
            config.area_width,
            config.area_height,
            config.n_nodes,
            config.speed,
            radio,
            positions=positions,
        )

        sender = 0
        receivers = tuple(range(1, 1 + config.n_receivers))
        if config.attack == "none":
            attackers: tuple[int, ...] = ()
            profiles: dict[int, AttackProfile] = {}
        else:
            attackers = tuple(range(1 + config.n_receivers, 1 + config.n_receivers + config.n_attackers))
            kind = AttackKind(config.attack)
            profiles = {}
            for a in attackers:
                profile = AttackProfile(
                    kind=kind,
                    rush_delay=config.rush_delay,
                    drop_prob=config.drop_prob,
                    hold_delay=config.hold_delay,
                    rush_scope=config.rush_scope,
                )
                profile.validate(radio.proc_delay_lo)
                profiles[a] = profile
            if positions is None:
                place_attackers(
                    self.world,
                    Placement(config.placement),
                    sender,
                    receivers,
                    attackers,
                    self.streams.get("placement"),
                )

        self.trace = RunTrace(
            config=dataclasses.asdict(config),
            n_nodes=config.n_nodes,
            sender=sender,
            receivers=receivers,
            attackers=attackers,
            event_log=[] if record_events else None,
        )
        self.protocol = MeshProtocol(
            self.engine,
            self.world,
            self.trace,
            sender,
            receivers,
            profiles,
            self.streams.get("jitter"),
            self.streams.get("attack"),
            config.refresh_interval,
            config.fg_lifetime,
            config.data_rate,
        )

        self.world.start_motion()
        self.engine.schedule(0.0, EV_QUERY_ORIGIN, 0)
        if config.data_rate > 0:
            # The session starts one inter-packet interval after data_start, so
            # the round-0 replies have instated a forwarding group by the time
            # the first packet needs relaying.
            self.engine.schedule(config.data_start + 1.0 / config.data_rate, EV_DATA_ORIGIN, 0)
        self.engine.schedule(config.duration, EV_SIM_END, 0)
        if record_events:
            self.engine.handler = self._dispatch_logged

    def run(self) -> RunTrace:
        self.engine.run_until(self.config.duration)
        self.trace.processed_events = self.engine.processed
        return self.trace

    def _dispatch(self, t: float, kind: int, node: int, payload) -> None:
        if kind == EV_QUERY_ARRIVAL:
            self.protocol.handle_query(node, payload, t)
        elif kind == EV_DATA_ARRIVAL:
            self.protocol.forward_data(node, payload, t)
        elif kind == EV_REPLY_ARRIVAL:
            self.protocol.handle_reply(node, payload, t)
        elif kind == EV_WAYPOINT:
            self.world.handle_waypoint(node, t)
        elif kind == EV_QUERY_ORIGIN:
            self.protocol.originate_query(node, t)
        elif kind == EV_DATA_ORIGIN:
            self.protocol.originate_data(node, t)
        # EV_SIM_END is a horizon marker; nothing to do.

    def _dispatch_logged(self, t: float, kind: int, node: int, payload) -> None:
        self.trace.event_log.append(format_event(t, kind, node, payload))
        self._dispatch(t, kind, node, payload)


def format_event(t: float, kind: int, node: int, payload) -> str:
    """One fixed-field line per processed event (the --trace dump format)."""
    if kind == EV_QUERY_ARRIVAL:
        return (
            f"t={t:.9f} ev=query_arrival node={node} src={payload.source} seq={payload.seq} "
            f"prev={payload.prev_hop} rec={'-'.join(map(str, payload.hop_record))}"
        )
    if kind == EV_DATA_ARRIVAL:
        return (
            f"t={t:.9f} ev=data_arrival node={node} src={payload.source} seq={payload.session_seq} "
            f"origin={payload.origin_time:.9f} rec={'-'.join(map(str, payload.hop_record))}"
        )
    if kind == EV_REPLY_ARRIVAL:
        return (
            f"t={t:.9f} ev=reply_arrival node={node} src={payload.source} seq={payload.seq} "
            f"receiver={payload.receiver} next={payload.next_hop} "
            f"rec={'-'.join(map(str, payload.hop_record))}"
        )
    if kind == EV_WAYPOINT:
        return f"t={t:.9f} ev=waypoint node={node}"
    if kind == EV_QUERY_ORIGIN:
        return f"t={t:.9f} ev=query_origin round={node}"
    if kind == EV_DATA_ORIGIN:
        return f"t={t:.9f} ev=data_origin seq={node}"
    return f"t={t:.9f} ev=sim_end"
