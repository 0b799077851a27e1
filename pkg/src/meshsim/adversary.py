"""Attacker behaviors and placement strategies.

Four behaviors are modeled:

* rushing      - forwards control packets (and, under scope "all", data) with a
                 near-zero processing delay, winning duplicate-suppression races;
* blackhole    - once inside the forwarding group, drops each data packet with a
                 configured probability instead of relaying it;
* jellyfish    - once inside the forwarding group, holds each data packet for an
                 extra fixed delay before relaying it;
* neighbor     - relays route queries without recording itself as a hop, so
                 downstream nodes learn an upstream that may not be a radio
                 neighbor at all.

Blackhole and jellyfish presuppose forwarding-group membership, so the harness
composes them with rushing on the control plane.  Both readings of what a
rushing node hurries are supported: scope "control-only" rushes queries and
replies, scope "all" additionally rushes data relays.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

from .engine import RngStream

log = logging.getLogger(__name__)

RUSH_SCOPE_CONTROL = "control-only"
RUSH_SCOPE_ALL = "all"


class AttackKind(Enum):
    RUSHING = "rushing"
    BLACKHOLE = "blackhole"
    JELLYFISH = "jellyfish"
    NEIGHBOR = "neighbor"


class Placement(Enum):
    NEAR_SENDER = "near-sender"
    NEAR_RECEIVER = "near-receiver"
    UNIFORM = "uniform"


@dataclass(slots=True)
class AttackProfile:
    """One attacker's behavior parameters."""

    kind: AttackKind
    rush_delay: float = 0.0005
    drop_prob: float = 1.0
    hold_delay: float = 0.5
    rush_scope: str = RUSH_SCOPE_ALL

    def validate(self, proc_delay_lo: float) -> None:
        if self.rush_delay < 0:
            raise ValueError(f"rush_delay must be >= 0, got {self.rush_delay!r}")
        if not 0.0 <= self.drop_prob <= 1.0:
            raise ValueError(f"drop_prob must lie in [0, 1], got {self.drop_prob!r}")
        if self.kind is AttackKind.JELLYFISH and self.hold_delay <= 0:
            raise ValueError(f"hold_delay must be > 0, got {self.hold_delay!r}")
        if self.rush_scope not in (RUSH_SCOPE_CONTROL, RUSH_SCOPE_ALL):
            raise ValueError(f"rush_scope must be 'control-only' or 'all', got {self.rush_scope!r}")
        if self.rushes_control and self.rush_delay >= proc_delay_lo:
            # Not rejected: the pathological regime (attacker no faster than the
            # legitimate jitter floor) is exactly what tie-break validation runs.
            log.warning(
                "pathological configuration: rush_delay %g >= legitimate jitter floor %g; "
                "the rushing race may be decided by tie-breaking",
                self.rush_delay,
                proc_delay_lo,
            )

    @property
    def rushes_control(self) -> bool:
        """Rushing, and its forwarding-group-invading compositions, rush control packets."""
        return self.kind in (AttackKind.RUSHING, AttackKind.BLACKHOLE, AttackKind.JELLYFISH)

    @property
    def rushes_data(self) -> bool:
        return self.kind is AttackKind.RUSHING and self.rush_scope == RUSH_SCOPE_ALL


def place_attackers(
    world,
    placement: Placement,
    sender: int,
    receivers: tuple[int, ...],
    attackers: tuple[int, ...],
    rng: RngStream,
) -> None:
    """Adjust attacker starting positions according to the placement strategy.

    Near-sender and near-receiver attackers start uniformly within one radio
    range of their anchor (clipped to the area, which cannot increase the
    distance to an anchor inside it); uniform attackers keep the area-uniform
    position they were initialized with.  Attackers move like every other node
    afterwards.
    """
    if not attackers:
        return
    if placement is Placement.UNIFORM:
        return
    if placement is Placement.NEAR_SENDER:
        anchors = [sender] * len(attackers)
    else:
        # One attacker per distinct receiver first, wrapping if outnumbered.
        order = rng.sample(list(receivers), min(len(attackers), len(receivers)))
        anchors = [order[i % len(order)] for i in range(len(attackers))]
    for attacker, anchor in zip(attackers, anchors):
        ax, ay = world.position_at(anchor, 0.0)
        radius = world.radio.radio_range * math.sqrt(rng.random())
        angle = 2.0 * math.pi * rng.random()
        x = min(max(ax + radius * math.cos(angle), 0.0), world.width)
        y = min(max(ay + radius * math.sin(angle), 0.0), world.height)
        world.set_position(attacker, x, y)
