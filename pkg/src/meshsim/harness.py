"""Experiment orchestration: config parsing, seeded sweeps, CSV emission, presets."""

from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from statistics import fmean, stdev
from typing import Callable, Sequence

from .adversary import AttackKind, AttackProfile
from .analysis import RunMetrics, RunTrace, compute_metrics
from .simulation import Simulation
from .world import RadioParams

log = logging.getLogger(__name__)

ATTACKS = ("none", "rushing", "blackhole", "jellyfish", "neighbor")
PLACEMENTS = ("near-sender", "near-receiver", "uniform")
RUSH_SCOPES = ("control-only", "all")
PRESET_NAMES = ("fig7", "fig8", "fig9", "paper-fig-7-9")

CSV_COLUMNS = (
    "run_id",
    "seed",
    "placement",
    "attack",
    "n_nodes",
    "speed",
    "asr_fg",
    "asr_data",
    "pdr",
    "mean_delay",
    "drops_attacker",
    "drops_duplicate",
    "drops_stale_reply",
)


class ConfigError(Exception):
    """A configuration key violated its constraint."""


class RunFailure(Exception):
    """A run inside a sweep failed; completed rows are preserved for flushing."""

    def __init__(self, message: str, rows: list["ResultRow"]):
        super().__init__(message)
        self.rows = rows


@dataclass
class ExperimentConfig:
    """Flat experiment parameters; every key of the plain-text config format."""

    area_width: float = 500.0
    area_height: float = 500.0
    n_nodes: int = 50
    n_receivers: int = 5
    n_attackers: int = 1
    attack: str = "none"
    placement: str = "uniform"
    rush_scope: str = "all"
    rush_delay: float = 0.0005
    drop_prob: float = 1.0
    hold_delay: float = 0.5
    speed: float = 1.0
    duration: float = 1000.0
    refresh_interval: float = 3.0
    fg_lifetime: float = 6.0
    data_rate: float = 4.0
    data_start: float = 0.0
    radio_range: float = 250.0
    bitrate: float = 2_000_000.0
    proc_delay_lo: float = 0.005
    proc_delay_hi: float = 0.015
    ctrl_packet_bits: int = 512
    data_packet_bits: int = 4096
    seed: int = 1
    runs: int = 1

    def radio_params(self) -> RadioParams:
        return RadioParams(
            radio_range=self.radio_range,
            bitrate=self.bitrate,
            proc_delay_lo=self.proc_delay_lo,
            proc_delay_hi=self.proc_delay_hi,
            ctrl_packet_bits=self.ctrl_packet_bits,
            data_packet_bits=self.data_packet_bits,
        )

    def validate(self) -> None:
        def require(ok: bool, key: str, constraint: str) -> None:
            if not ok:
                raise ConfigError(f"{key}: {constraint} (got {getattr(self, key)!r})")

        require(self.area_width > 0, "area_width", "must be > 0")
        require(self.area_height > 0, "area_height", "must be > 0")
        require(self.n_nodes >= 2, "n_nodes", "must be >= 2")
        require(self.n_receivers >= 1, "n_receivers", "must be >= 1")
        require(self.attack in ATTACKS, "attack", f"must be one of {ATTACKS}")
        require(self.placement in PLACEMENTS, "placement", f"must be one of {PLACEMENTS}")
        require(self.rush_scope in RUSH_SCOPES, "rush_scope", f"must be one of {RUSH_SCOPES}")
        if self.attack == "none":
            require(
                1 + self.n_receivers <= self.n_nodes,
                "n_receivers",
                "sender plus receivers must fit in n_nodes",
            )
        else:
            require(self.n_attackers >= 1, "n_attackers", "must be >= 1 when an attack is selected")
            require(
                1 + self.n_receivers + self.n_attackers <= self.n_nodes,
                "n_attackers",
                "sender, receivers and attackers must fit in n_nodes",
            )
        require(self.rush_delay >= 0, "rush_delay", "must be >= 0")
        require(0.0 <= self.drop_prob <= 1.0, "drop_prob", "must lie in [0, 1]")
        if self.attack == "jellyfish":
            require(self.hold_delay > 0, "hold_delay", "must be > 0")
        require(self.speed >= 0, "speed", "must be >= 0")
        require(self.duration > 0, "duration", "must be > 0")
        require(self.refresh_interval > 0, "refresh_interval", "must be > 0")
        require(self.fg_lifetime > 0, "fg_lifetime", "must be > 0")
        require(self.data_rate >= 0, "data_rate", "must be >= 0")
        require(self.data_start >= 0, "data_start", "must be >= 0")
        require(self.radio_range > 0, "radio_range", "must be > 0")
        require(self.bitrate > 0, "bitrate", "must be > 0")
        require(self.proc_delay_lo >= 0, "proc_delay_lo", "must be >= 0")
        require(
            self.proc_delay_lo <= self.proc_delay_hi,
            "proc_delay_hi",
            "must be >= proc_delay_lo",
        )
        require(self.ctrl_packet_bits > 0, "ctrl_packet_bits", "must be > 0")
        require(self.data_packet_bits > 0, "data_packet_bits", "must be > 0")
        require(self.runs >= 1, "runs", "must be >= 1")
        if self.attack != "none":
            profile = AttackProfile(
                kind=AttackKind(self.attack),
                rush_delay=self.rush_delay,
                drop_prob=self.drop_prob,
                hold_delay=self.hold_delay,
                rush_scope=self.rush_scope,
            )
            try:
                profile.validate(self.proc_delay_lo)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc


# Config-file keys that differ from field names.
_KEY_ALIASES = {"range": "radio_range"}


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse the plain-text `key = value` config format (# starts a comment)."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.split("#", 1)[0].strip()
    return entries


def build_config(mapping: dict) -> ExperimentConfig:
    """Validated config from a flat mapping; unknown keys are rejected."""
    fields = {f.name: f for f in dataclasses.fields(ExperimentConfig)}
    kwargs = {}
    for key, value in mapping.items():
        name = _KEY_ALIASES.get(key, key)
        field = fields.get(name)
        if field is None:
            raise ConfigError(f"unknown configuration key {key!r}")
        if isinstance(value, str):
            try:
                if field.type in ("int", int):
                    value = int(value)
                elif field.type in ("float", float):
                    value = float(value)
            except ValueError as exc:
                raise ConfigError(f"{key}: expected a {field.type} value, got {value!r}") from exc
        kwargs[name] = value
    config = ExperimentConfig(**kwargs)
    config.validate()
    return config


@dataclass(slots=True)
class ResultRow:
    """One completed run, in the fixed CSV column order."""

    run_id: int
    seed: int
    placement: str
    attack: str
    n_nodes: int
    speed: float
    asr_fg: float
    asr_data: float
    pdr: float
    mean_delay: float
    drops_attacker: int
    drops_duplicate: int
    drops_stale_reply: int

    def to_csv(self) -> str:
        return (
            f"{self.run_id},{self.seed},{self.placement},{self.attack},{self.n_nodes},"
            f"{self.speed:.6f},{self.asr_fg:.6f},{self.asr_data:.6f},{self.pdr:.6f},"
            f"{self.mean_delay:.6f},{self.drops_attacker},{self.drops_duplicate},"
            f"{self.drops_stale_reply}"
        )


def run_single(
    config: ExperimentConfig,
    positions: list[tuple[float, float]] | None = None,
    record_events: bool = False,
) -> tuple[RunTrace, RunMetrics]:
    """Execute one simulation run and compute its metrics."""
    trace = Simulation(config, positions=positions, record_events=record_events).run()
    return trace, compute_metrics(trace)


def run_sweep(
    configs: Sequence[ExperimentConfig],
    trace_sink: Callable[[int, list[str]], None] | None = None,
) -> list[ResultRow]:
    """Run every config `runs` times with seeds seed, seed+1, ...

    Seeds restart from each config's base seed, so sweeps that vary one
    dimension reuse identical per-index seeds: mobility and traffic are paired
    across the sweep.  Rows are ordered (config, run index) and run_id is the
    global position, making reruns byte-identical.
    """
    rows: list[ResultRow] = []
    run_id = 0
    for config in configs:
        for index in range(config.runs):
            run_config = replace(config, seed=config.seed + index, runs=1)
            try:
                trace, metrics = run_single(run_config, record_events=trace_sink is not None)
            except Exception as exc:  # noqa: BLE001 - partial results must survive
                raise RunFailure(f"run {run_id} (seed {run_config.seed}) failed: {exc}", rows) from exc
            if trace_sink is not None:
                trace_sink(run_id, trace.event_log or [])
            rows.append(
                ResultRow(
                    run_id=run_id,
                    seed=run_config.seed,
                    placement=config.placement,
                    attack=config.attack,
                    n_nodes=config.n_nodes,
                    speed=config.speed,
                    asr_fg=metrics.asr_fg,
                    asr_data=metrics.asr_data,
                    pdr=metrics.pdr,
                    mean_delay=metrics.mean_delay,
                    drops_attacker=metrics.drops_attacker,
                    drops_duplicate=metrics.drops_duplicate,
                    drops_stale_reply=metrics.drops_stale_reply,
                )
            )
            run_id += 1
    return rows


def run_experiment(config: ExperimentConfig, **kwargs) -> list[ResultRow]:
    return run_sweep([config], **kwargs)


def expand_preset(name: str, base: ExperimentConfig) -> list[ExperimentConfig]:
    """Scenario presets: one multicast group of 50 nodes, 5 receivers, 1 attacker.

    fig7/fig8/fig9 sweep mobility speeds {0, 1, 10} m/s for one placement,
    with and without the rushing attack; paper-fig-7-9 compares all three
    placements under attack at 1 m/s.
    """
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    base = replace(
        base,
        n_nodes=50,
        n_receivers=5,
        n_attackers=1,
        duration=1000.0,
        attack="rushing",
    )
    if name == "paper-fig-7-9":
        return [replace(base, placement=p, speed=1.0) for p in PLACEMENTS]
    placement = {"fig7": "near-sender", "fig8": "near-receiver", "fig9": "uniform"}[name]
    return [
        replace(base, attack=attack, placement=placement, speed=speed)
        for attack in ("rushing", "none")
        for speed in (0.0, 1.0, 10.0)
    ]


def emit_csv(rows: Sequence[ResultRow], path: str | Path) -> None:
    """Write header plus one fixed-format line per row; rerun-identical bytes."""
    if not rows:
        raise ValueError("no result rows to write")
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(row.to_csv() for row in rows)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def ci95(values: Sequence[float]) -> float:
    """Normal-approximation half-width of the 95% confidence interval."""
    if len(values) < 2:
        return 0.0
    return 1.96 * stdev(values) / math.sqrt(len(values))


def summarize(rows: Sequence[ResultRow]) -> str:
    """Per-group mean and 95% CI footer for the run report."""
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.placement, row.attack, row.n_nodes, row.speed), []).append(row)
    lines = ["summary (mean +/- 95% CI per group):"]
    for (placement, attack, n_nodes, speed), members in groups.items():
        parts = [
            f"placement={placement}",
            f"attack={attack}",
            f"n_nodes={n_nodes}",
            f"speed={speed:.6f}",
            f"runs={len(members)}",
        ]
        for metric in ("asr_fg", "asr_data", "pdr", "mean_delay"):
            values = [getattr(m, metric) for m in members]
            parts.append(f"{metric}={fmean(values):.6f}+/-{ci95(values):.6f}")
        lines.append("  " + " ".join(parts))
    return "\n".join(lines)
