"""Deterministic mesh-multicast MANET simulator with a pluggable adversary layer."""

from .adversary import AttackKind, AttackProfile, Placement
from .analysis import (
    RunMetrics,
    RunTrace,
    compute_metrics,
    earliest_arrival_oracle,
    unit_disk_adjacency,
)
from .engine import Engine, RngStream, RngStreams, SchedulingError
from .harness import (
    ConfigError,
    ExperimentConfig,
    ResultRow,
    RunFailure,
    build_config,
    emit_csv,
    expand_preset,
    load_config_file,
    run_experiment,
    run_single,
    run_sweep,
    summarize,
)
from .protocol import DataPacket, JoinQuery, JoinReply
from .simulation import Simulation
from .world import RadioParams, World

__all__ = [
    "AttackKind",
    "AttackProfile",
    "Placement",
    "RunMetrics",
    "RunTrace",
    "compute_metrics",
    "earliest_arrival_oracle",
    "unit_disk_adjacency",
    "Engine",
    "RngStream",
    "RngStreams",
    "SchedulingError",
    "ConfigError",
    "ExperimentConfig",
    "ResultRow",
    "RunFailure",
    "build_config",
    "emit_csv",
    "expand_preset",
    "load_config_file",
    "run_experiment",
    "run_single",
    "run_sweep",
    "summarize",
    "DataPacket",
    "JoinQuery",
    "JoinReply",
    "Simulation",
    "RadioParams",
    "World",
]
