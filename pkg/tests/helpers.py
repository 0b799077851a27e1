"""Shared scripted topologies and run helpers for the test suite.

Node ids follow the simulator's role convention: 0 is the sender, receivers
come next, then attackers, then plain relays.  All topologies below use a
radio range of 250 m and spacings chosen so adjacency is unambiguous.
"""

from __future__ import annotations

import math
import random

from meshsim.harness import ExperimentConfig
from meshsim.simulation import Simulation


def run_static(config: ExperimentConfig, positions, record_events: bool = False):
    return Simulation(config, positions=positions, record_events=record_events).run()


def zero_jitter(**kwargs) -> dict:
    """Config kwargs for a deterministic 10 ms legitimate processing delay."""
    base = {"proc_delay_lo": 0.010, "proc_delay_hi": 0.010, "speed": 0.0}
    base.update(kwargs)
    return base


# -- five-node diamond: sender fans out to two branches that merge ------------
#
#         branch_hi (id 2 = attacker)
#       /                            \
#  S(0)                               merge (3) --- sink receiver (1)
#       \                            /
#         branch_lo (id 4, plain)
#
# Only consecutive pairs are within the 250 m range.

DIAMOND_AREA = (700.0, 400.0)
DIAMOND_POSITIONS = [
    (0.0, 200.0),  # 0: sender
    (640.0, 200.0),  # 1: receiver (sink)
    (200.0, 340.0),  # 2: attacker branch
    (400.0, 200.0),  # 3: merge
    (200.0, 60.0),  # 4: plain branch
]


def diamond_config(**kwargs) -> ExperimentConfig:
    base = dict(
        area_width=DIAMOND_AREA[0],
        area_height=DIAMOND_AREA[1],
        n_nodes=5,
        n_receivers=1,
        n_attackers=1,
        attack="rushing",
        duration=30.0,
        seed=7,
        speed=0.0,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


# Same geometry with both branch slots occupied by a receiver (id 2) and the
# attacker (id 3): the attacker now has the larger node id, so an exact tie at
# the merge must resolve against it.
DIAMOND_TIE_POSITIONS = [
    (0.0, 200.0),  # 0: sender
    (640.0, 200.0),  # 1: receiver (sink)
    (200.0, 340.0),  # 2: receiver on one branch
    (200.0, 60.0),  # 3: attacker on the other branch
    (400.0, 200.0),  # 4: merge
]


def diamond_tie_config(**kwargs) -> ExperimentConfig:
    base = dict(
        area_width=DIAMOND_AREA[0],
        area_height=DIAMOND_AREA[1],
        n_nodes=5,
        n_receivers=2,
        n_attackers=1,
        attack="rushing",
        duration=30.0,
        seed=7,
        speed=0.0,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


# -- three-node line: the middle node is the only relay -----------------------

LINE3_AREA = (500.0, 100.0)
LINE3_POSITIONS = [
    (0.0, 50.0),  # 0: sender
    (400.0, 50.0),  # 1: receiver
    (200.0, 50.0),  # 2: middle (attacker slot when an attack is configured)
]


def line3_config(**kwargs) -> ExperimentConfig:
    base = dict(
        area_width=LINE3_AREA[0],
        area_height=LINE3_AREA[1],
        n_nodes=3,
        n_receivers=1,
        n_attackers=1,
        duration=30.0,
        seed=11,
        speed=0.0,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


# -- four-node line with two attacker slots in the middle ---------------------

LINE4_AREA = (700.0, 100.0)
LINE4_POSITIONS = [
    (0.0, 50.0),  # 0: sender
    (600.0, 50.0),  # 1: receiver
    (200.0, 50.0),  # 2: first attacker
    (400.0, 50.0),  # 3: second attacker
]


def line4_config(**kwargs) -> ExperimentConfig:
    base = dict(
        area_width=LINE4_AREA[0],
        area_height=LINE4_AREA[1],
        n_nodes=4,
        n_receivers=1,
        n_attackers=2,
        duration=30.0,
        seed=13,
        speed=0.0,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


# -- five-node line for the neighbor attack -----------------------------------
#
# sender(0) -- X(3) -- attacker(2) -- Y(4) -- receiver(1), spacing 200 m:
# X and Y are out of range of each other, so the attacker's unrecorded hop
# leaves Y believing X is its upstream neighbor.

LINE5_AREA = (900.0, 100.0)
LINE5_POSITIONS = [
    (0.0, 50.0),  # 0: sender
    (800.0, 50.0),  # 1: receiver
    (400.0, 50.0),  # 2: attacker
    (200.0, 50.0),  # 3: X
    (600.0, 50.0),  # 4: Y
]

# Compressed variant: X and Y are 240 m apart, so the neighbor the attacker
# fakes happens to be a real one and the attack is harmless.
LINE5_CLOSE_POSITIONS = [
    (0.0, 50.0),  # 0: sender
    (640.0, 50.0),  # 1: receiver
    (320.0, 50.0),  # 2: attacker
    (200.0, 50.0),  # 3: X
    (440.0, 50.0),  # 4: Y
]


def line5_config(**kwargs) -> ExperimentConfig:
    base = dict(
        area_width=LINE5_AREA[0],
        area_height=LINE5_AREA[1],
        n_nodes=5,
        n_receivers=1,
        n_attackers=1,
        attack="neighbor",
        duration=30.0,
        seed=17,
        speed=0.0,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


# -- two independent branches: attacker owns the path to one of two receivers --

BRANCH_AREA = (800.0, 800.0)
BRANCH_POSITIONS = [
    (500.0, 300.0),  # 0: sender
    (500.0, 700.0),  # 1: receiver behind the attacker
    (100.0, 300.0),  # 2: receiver behind the plain relay
    (500.0, 500.0),  # 3: attacker
    (300.0, 300.0),  # 4: plain relay
]


def branch_config(**kwargs) -> ExperimentConfig:
    base = dict(
        area_width=BRANCH_AREA[0],
        area_height=BRANCH_AREA[1],
        n_nodes=5,
        n_receivers=2,
        n_attackers=1,
        attack="rushing",
        duration=30.0,
        seed=19,
        speed=0.0,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


# -- random connected static topologies ---------------------------------------


def random_connected_positions(
    seed: int, n_nodes: int, width: float, height: float, radio_range: float
) -> list[tuple[float, float]]:
    """Rejection-sample uniform layouts until the unit-disk graph is connected."""
    rng = random.Random(seed)
    while True:
        pts = [(rng.uniform(0, width), rng.uniform(0, height)) for _ in range(n_nodes)]
        if _connected(pts, radio_range):
            return pts


def _connected(pts, radio_range) -> bool:
    n = len(pts)
    r2 = radio_range * radio_range
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        xi, yi = pts[i]
        for j in range(n):
            if j not in seen and (pts[j][0] - xi) ** 2 + (pts[j][1] - yi) ** 2 <= r2:
                seen.add(j)
                frontier.append(j)
    return len(seen) == n


def distance(a: tuple[float, float], b: tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])
