"""Command-line interface: `meshsim run` for sweeps, `meshsim plot` for charts."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .harness import ConfigError, RunFailure
from .plots import FigureSpec, PlotError, render

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshsim",
        description="Discrete-event simulator of mesh multicast routing under adversarial nodes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a seeded experiment sweep and write a CSV")
    run_p.add_argument("--config", metavar="FILE", help="plain-text key = value configuration file")
    run_p.add_argument(
        "--preset",
        choices=harness.PRESET_NAMES,
        help="scenario preset: fig7/fig8/fig9 sweep speeds for one placement with and "
        "without the rushing attack; paper-fig-7-9 compares the three placements",
    )
    run_p.add_argument("--out", metavar="CSV", default="results.csv", help="output CSV path")
    run_p.add_argument("--seed", type=int, help="base seed; run i uses seed + i")
    run_p.add_argument("--runs", type=int, help="independent runs per configuration point")
    run_p.add_argument("--placement", choices=harness.PLACEMENTS)
    run_p.add_argument("--attack", choices=harness.ATTACKS)
    run_p.add_argument("--speed", type=float, help="node speed in m/s")
    run_p.add_argument("--nodes", type=int, help="total node count")
    run_p.add_argument("--trace", metavar="FILE", help="dump one line per processed event")

    plot_p = sub.add_parser("plot", help="render grouped mean curves from a sweep CSV")
    plot_p.add_argument("--csv", required=True, metavar="FILE", help="input CSV from `meshsim run`")
    plot_p.add_argument("--x", default="speed", help="x-axis column (default: speed)")
    plot_p.add_argument("--y", default="asr_data", help="y-axis column (default: asr_data)")
    plot_p.add_argument(
        "--group",
        default="placement,attack",
        help="comma-separated grouping columns (default: placement,attack)",
    )
    plot_p.add_argument("--out", required=True, metavar="IMAGE", help="output image (.png or .svg)")
    return parser


def _run_command(args: argparse.Namespace) -> int:
    mapping: dict = {}
    if args.config:
        if not Path(args.config).is_file():
            print(f"error: config file not found: {args.config}", file=sys.stderr)
            return EXIT_CONFIG
        mapping.update(harness.load_config_file(args.config))
    overrides = {
        "seed": args.seed,
        "runs": args.runs,
        "placement": args.placement,
        "attack": args.attack,
        "speed": args.speed,
        "n_nodes": args.nodes,
    }
    if args.preset:
        for flag in ("placement", "attack", "speed"):
            if overrides[flag] is not None:
                raise ConfigError(f"--{flag} cannot be combined with --preset (the preset sets it)")
        # Presets default to 30 runs per point unless explicitly overridden.
        if args.runs is None and "runs" not in mapping:
            overrides["runs"] = 30
    mapping.update({k: v for k, v in overrides.items() if v is not None})
    base = harness.build_config(mapping)
    configs = harness.expand_preset(args.preset, base) if args.preset else [base]

    trace_fh = None
    trace_sink = None
    if args.trace:
        trace_fh = open(args.trace, "w", newline="")

        def trace_sink(run_id: int, lines: list[str]) -> None:
            for line in lines:
                trace_fh.write(f"run={run_id} {line}\n")

    try:
        rows = harness.run_sweep(configs, trace_sink=trace_sink)
    except RunFailure as failure:
        print(f"error: {failure}", file=sys.stderr)
        if failure.rows:
            harness.emit_csv(failure.rows, args.out)
            with open(args.out, "a", newline="") as fh:
                fh.write(f"# aborted: {failure}\n")
            print(f"partial results ({len(failure.rows)} rows) flushed to {args.out}", file=sys.stderr)
        return EXIT_RUNTIME
    finally:
        if trace_fh is not None:
            trace_fh.close()

    harness.emit_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    print(harness.summarize(rows))
    return EXIT_OK


def _plot_command(args: argparse.Namespace) -> int:
    if not Path(args.csv).is_file():
        print(f"error: CSV file not found: {args.csv}", file=sys.stderr)
        return EXIT_CONFIG
    group_by = tuple(k.strip() for k in args.group.split(",") if k.strip())
    spec = FigureSpec(csv_path=args.csv, out_path=args.out, x=args.x, y=args.y, group_by=group_by)
    out = render(spec)
    print(f"wrote {out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _run_command(args)
        return _plot_command(args)
    except (ConfigError, PlotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
