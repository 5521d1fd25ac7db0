"""
Tests for the experiment runner and output writers.
"""

import json
import math

import pytest

from src.cost_process.moments import harmonic
from src.experiments.config import build_config
from src.experiments.output import format_csv, format_json, write_csv, write_json
from src.experiments.runner import execute_tasks, run
from src.experiments.studies import STUDIES, ReplicateTask, cost_replicate


def cost_task(reps, n=20):
    return ReplicateTask(
        key=f"simulate-cost:bipartite:full-graph:n={n}",
        fn=cost_replicate,
        params=dict(n=n, kind="bipartite", engine="full-graph", scale="unit", allow_odd=False,
                    max_full_graph_n=4096),
        indices=range(reps),
    )


class TestExecuteTasks:
    """Replicate order and stream assignment."""

    def test_rows_in_replicate_order(self):
        rows = execute_tasks(7, [cost_task(10)])
        assert [row["replicate"] for row in rows] == list(range(10))

    def test_split_preserves_streams(self):
        whole = execute_tasks(7, [cost_task(12)])
        parts = execute_tasks(7, cost_task(12).split(5))
        assert whole == parts
        assert [len(part.indices) for part in cost_task(12).split(5)] == [5, 5, 2]

    def test_seed_changes_results(self):
        assert execute_tasks(7, [cost_task(3)]) != execute_tasks(8, [cost_task(3)])

    @pytest.mark.integration
    def test_independent_of_thread_count(self):
        tasks = [cost_task(16), cost_task(9, n=8)]
        assert execute_tasks(11, tasks, threads=1) == execute_tasks(11, tasks, threads=3)


class TestRun:
    """End-to-end runs of individual studies."""

    def setup_method(self):
        self.config = build_config(command="simulate-cost", seed=42, n=[1000], reps=100, threads=1)

    def test_simulate_cost(self, settings):
        result = run(self.config, settings)
        assert len(result.rows) == 100
        assert list(result.table().columns) == ["replicate", "n", "kind", "engine", "total_cost"]
        mean = result.estimates["n=1000:mean"]
        assert abs(mean["value"] - harmonic(1000)) <= 3 * mean["se"]
        assert result.estimates["n=1000:exact_mean"]["value"] == pytest.approx(7.485470860550345)
        assert result.verdicts["n=1000:mean_within_se"]
        assert result.runtime_seconds is None

    def test_rank_on_single_edge(self, settings):
        result = run(build_config(command="rank", seed=1, n=[1], reps=10, threads=1), settings)
        assert len(result.rows) == 20
        assert (result.rows["rank"] == 1).all()
        assert result.estimates["n=1:P(rank=1)"]["value"] == 1.0
        assert "n=1:rank_one" not in result.verdicts
        assert result.passed

    def test_rank_verdict_from_min_n(self, settings):
        config = build_config(command="rank", seed=1, n=[10, 100], reps=1, threads=1)
        result = run(config, settings)
        assert "n=10:P(rank=1)" in result.estimates
        assert "n=10:rank_one" not in result.verdicts
        assert "n=100:rank_one" in result.verdicts

    def test_overlap_at_eps_zero(self, settings):
        config = build_config(command="overlap", seed=3, n=[60], eps=[0.0], reps=5, threads=1)
        result = run(config, settings)
        assert (result.rows["overlap"] == 1.0).all()
        assert result.verdicts["n=60,eps=0:identical"]
        assert result.passed

    def test_oracle_study(self, settings):
        config = build_config(command="oracle", seed=5, n=[3], reps=10, threads=1)
        result = run(config, settings)
        assert result.verdicts["n=3:uniqueness"]
        assert (result.rows["stable_count"] == 1).all()

    def test_interlacing_study(self, settings):
        config = build_config(command="interlacing", seed=5, n=[6], reps=4, threads=1)
        result = run(config, settings)
        assert len(result.rows) == 4 * 12
        assert result.verdicts["n=6:interlacing"]

    def test_noise_corr_columns(self):
        config = build_config(command="noise-corr", seed=1, split_m=2)
        assert STUDIES[config.command].columns(config)[-4:] == ["bulk0", "tail0", "bulk_eps", "tail_eps"]

    def test_recorded_runtime(self, settings):
        config = build_config(command="simulate-cost", seed=1, n=[10], reps=5, record_runtime=True)
        assert run(config, settings).runtime_seconds >= 0.0


class TestOutput:
    """CSV and JSON formats."""

    def setup_method(self):
        self.config = build_config(command="simulate-cost", seed=9, n=[50], reps=20, threads=1)

    def test_csv_header(self, settings):
        lines = format_csv(run(self.config, settings)).splitlines()
        assert lines[0].startswith("# stable-matching-lab ")
        assert lines[1] == "# seed=9"
        assert lines[2].startswith("# config=")
        assert lines[3] == "replicate,n,kind,engine,total_cost"
        assert len(lines) == 4 + 20
        assert "threads" not in lines[2]

    def test_json_summary(self, settings):
        summary = json.loads(format_json(run(self.config, settings)))
        assert set(summary) == {"version", "seed", "config", "estimates", "verdicts", "runtime_seconds"}
        assert summary["runtime_seconds"] is None
        assert summary["config"]["command"] == "simulate-cost"

    def test_non_finite_values(self, settings):
        result = run(build_config(command="pwit-rank", seed=2, reps=50, j_max=1, r_max=2,
                                  reference_reps=100, threads=1), settings)
        text = format_json(result)
        assert "Infinity" not in text and "NaN" not in text
        assert math.isinf(result.rows["rank"].max())
        assert any(line.endswith(",inf") for line in format_csv(result).splitlines())

    def test_reruns_are_byte_identical(self, settings):
        first = run(self.config, settings)
        second = run(self.config, settings)
        assert format_csv(first) == format_csv(second)
        assert format_json(first) == format_json(second)

    def test_write_files(self, settings, tmp_path):
        csv_path, json_path = tmp_path / "rows.csv", tmp_path / "summary.json"
        config = self.config.model_copy(update=dict(out_csv=str(csv_path), out_json=str(json_path)))
        result = run(config, settings)
        assert csv_path.read_text() == format_csv(result)
        assert json_path.read_text() == format_json(result)

    def test_write_helpers(self, settings, tmp_path):
        result = run(self.config, settings)
        write_csv(result, str(tmp_path / "a.csv"))
        write_json(result, str(tmp_path / "a.json"))
        assert json.loads((tmp_path / "a.json").read_text())["seed"] == 9
