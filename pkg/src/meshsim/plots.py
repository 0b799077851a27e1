"""Charts from sweep CSVs: grouped mean curves with 95% confidence whiskers.

This module touches nothing but the published CSV schema, so it can be pointed
at any results file without importing simulator internals.  Rendering is
deterministic: the same CSV yields byte-identical image files.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean, stdev

import matplotlib
from matplotlib.figure import Figure


class PlotError(Exception):
    """The CSV does not satisfy the figure spec."""


@dataclass
class FigureSpec:
    csv_path: str | Path
    out_path: str | Path
    x: str = "speed"
    y: str = "asr_data"
    group_by: tuple[str, ...] = ("placement", "attack")

    @property
    def image_format(self) -> str:
        suffix = Path(self.out_path).suffix.lower().lstrip(".")
        if suffix not in ("png", "svg"):
            raise PlotError(f"unsupported image format {suffix!r}; use .png or .svg")
        return suffix


def read_rows(csv_path: str | Path) -> list[dict[str, str]]:
    with open(csv_path, newline="") as fh:
        return list(csv.DictReader(fh))


def aggregate(
    rows: list[dict[str, str]], x: str, y: str, group_by: tuple[str, ...]
) -> dict[tuple[str, ...], list[tuple[float, float, float, int]]]:
    """Per-group curves: sorted (x, mean y, 95% CI half-width, n) points.

    Rows whose y value does not parse as a finite number are skipped; a group
    with no usable rows at all maps to an empty list.
    """
    if rows:
        header = rows[0].keys()
        for column in (x, y, *group_by):
            if column not in header:
                raise PlotError(f"column {column!r} not present in CSV (have {sorted(header)})")
    buckets: dict[tuple[str, ...], dict[float, list[float]]] = {}
    for row in rows:
        group = tuple(row[k] for k in group_by)
        series = buckets.setdefault(group, {})
        try:
            x_value = float(row[x])
            y_value = float(row[y])
        except ValueError:
            continue
        if not (math.isfinite(x_value) and math.isfinite(y_value)):
            continue
        series.setdefault(x_value, []).append(y_value)
    curves: dict[tuple[str, ...], list[tuple[float, float, float, int]]] = {}
    for group in sorted(buckets):
        points = []
        for x_value in sorted(buckets[group]):
            values = buckets[group][x_value]
            half_width = 1.96 * stdev(values) / math.sqrt(len(values)) if len(values) > 1 else 0.0
            points.append((x_value, fmean(values), half_width, len(values)))
        curves[group] = points
    return curves


def render(spec: FigureSpec) -> Path:
    """Render one grouped-curve chart; returns the written image path."""
    rows = read_rows(spec.csv_path)
    curves = aggregate(rows, spec.x, spec.y, spec.group_by)
    out_path = Path(spec.out_path)
    image_format = spec.image_format

    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.subplots()
    empty_groups = []
    for group, points in curves.items():
        label = " / ".join(group) if group else spec.y
        if not points:
            empty_groups.append(label)
            continue
        xs = [p[0] for p in points]
        means = [p[1] for p in points]
        cis = [p[2] for p in points]
        ax.errorbar(xs, means, yerr=cis, marker="o", capsize=3, label=label)
    ax.set_xlabel(spec.x)
    ax.set_ylabel(spec.y)
    ax.grid(True, alpha=0.3)
    if any(points for points in curves.values()):
        ax.legend()
    if empty_groups:
        ax.text(
            0.02,
            0.02,
            "no data: " + "; ".join(empty_groups),
            transform=ax.transAxes,
            fontsize=8,
            color="crimson",
        )
    metadata = {"Date": None} if image_format == "svg" else None
    with matplotlib.rc_context({"svg.hashsalt": "meshsim"}):
        fig.savefig(out_path, format=image_format, metadata=metadata, dpi=150)
    return out_path
