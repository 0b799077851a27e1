"""Chart aggregation correctness, determinism, and error handling."""

import math
from statistics import fmean

import pytest

from meshsim.harness import ExperimentConfig, emit_csv, run_experiment, run_sweep
from meshsim.plots import FigureSpec, PlotError, aggregate, read_rows, render

HEADER = (
    "run_id,seed,placement,attack,n_nodes,speed,asr_fg,asr_data,pdr,mean_delay,"
    "drops_attacker,drops_duplicate,drops_stale_reply"
)


def write_csv(path, rows):
    path.write_text(HEADER + "\n" + "\n".join(rows) + "\n")


def synthetic_rows():
    # Two speeds x two attack groups x three runs each.
    rows = []
    run_id = 0
    for attack, base in (("rushing", 0.4), ("none", 0.0)):
        for speed in (0.0, 1.0):
            for i in range(3):
                value = base + (0.01 * i if attack == "rushing" else 0.0)
                rows.append(
                    f"{run_id},{run_id},near-receiver,{attack},50,{speed:.6f},0.0,{value:.6f},"
                    f"1.0,0.01,0,0,0"
                )
                run_id += 1
    return rows


class TestAggregate:
    def test_means_match_independent_recomputation(self, tmp_path):
        path = tmp_path / "rows.csv"
        write_csv(path, synthetic_rows())
        rows = read_rows(path)
        curves = aggregate(rows, "speed", "asr_data", ("placement", "attack"))
        for group, points in curves.items():
            for x_value, mean, _ci, n in points:
                manual = [
                    float(r["asr_data"])
                    for r in rows
                    if (r["placement"], r["attack"]) == group and float(r["speed"]) == x_value
                ]
                assert n == len(manual)
                assert abs(mean - fmean(manual)) < 1e-9

    def test_attack_curve_lies_above_baseline(self, tmp_path):
        path = tmp_path / "rows.csv"
        write_csv(path, synthetic_rows())
        curves = aggregate(read_rows(path), "speed", "asr_data", ("attack",))
        attacked = dict((x, m) for x, m, _c, _n in curves[("rushing",)])
        baseline = dict((x, m) for x, m, _c, _n in curves[("none",)])
        assert set(attacked) == set(baseline)
        for x in attacked:
            assert attacked[x] > baseline[x]

    def test_baseline_only_rows_collapse_to_flat_zero(self, tmp_path):
        path = tmp_path / "rows.csv"
        write_csv(path, [r for r in synthetic_rows() if ",none," in r])
        curves = aggregate(read_rows(path), "speed", "asr_data", ("placement", "attack"))
        assert len(curves) == 1
        ((_group, points),) = curves.items()
        assert all(mean == 0.0 for _x, mean, _ci, _n in points)

    def test_missing_column_named_in_error(self, tmp_path):
        path = tmp_path / "rows.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(PlotError) as err:
            aggregate(read_rows(path), "speed", "asr_data", ("placement",))
        assert "speed" in str(err.value)

    def test_unparseable_rows_skipped(self, tmp_path):
        path = tmp_path / "rows.csv"
        write_csv(path, ["0,0,uniform,none,50,1.0,0,,1.0,0.01,0,0,0"])
        curves = aggregate(read_rows(path), "speed", "asr_data", ("attack",))
        assert curves[("none",)] == []


class TestRender:
    def test_render_writes_requested_format(self, tmp_path):
        csv_path = tmp_path / "rows.csv"
        write_csv(csv_path, synthetic_rows())
        for suffix in ("png", "svg"):
            out = tmp_path / f"figure.{suffix}"
            result = render(FigureSpec(csv_path=csv_path, out_path=out))
            assert result == out
            assert out.stat().st_size > 0

    def test_rendering_twice_is_byte_identical(self, tmp_path):
        csv_path = tmp_path / "rows.csv"
        write_csv(csv_path, synthetic_rows())
        out_a = tmp_path / "a.png"
        out_b = tmp_path / "b.png"
        render(FigureSpec(csv_path=csv_path, out_path=out_a))
        render(FigureSpec(csv_path=csv_path, out_path=out_b))
        assert out_a.read_bytes() == out_b.read_bytes()
        svg_a = tmp_path / "a.svg"
        svg_b = tmp_path / "b.svg"
        render(FigureSpec(csv_path=csv_path, out_path=svg_a))
        render(FigureSpec(csv_path=csv_path, out_path=svg_b))
        assert svg_a.read_bytes() == svg_b.read_bytes()

    def test_rendering_does_not_mutate_csv(self, tmp_path):
        csv_path = tmp_path / "rows.csv"
        write_csv(csv_path, synthetic_rows())
        before = csv_path.read_bytes()
        render(FigureSpec(csv_path=csv_path, out_path=tmp_path / "fig.png"))
        assert csv_path.read_bytes() == before

    def test_empty_group_is_noted_not_fatal(self, tmp_path):
        csv_path = tmp_path / "rows.csv"
        rows = synthetic_rows() + ["99,99,near-receiver,jellyfish,50,1.0,0,,1.0,0.01,0,0,0"]
        write_csv(csv_path, rows)
        out = tmp_path / "fig.svg"
        render(FigureSpec(csv_path=csv_path, out_path=out))
        assert "no data" in out.read_text()

    def test_unsupported_format_rejected(self, tmp_path):
        with pytest.raises(PlotError):
            FigureSpec(csv_path="x.csv", out_path="fig.pdf").image_format

    def test_real_sweep_csv_renders(self, tmp_path):
        config = ExperimentConfig(
            n_nodes=8, n_receivers=2, duration=6.0, attack="rushing", seed=2, runs=2
        )
        rows = run_sweep([config])
        csv_path = tmp_path / "real.csv"
        emit_csv(rows, csv_path)
        out = render(FigureSpec(csv_path=csv_path, out_path=tmp_path / "real.png"))
        assert out.is_file()
