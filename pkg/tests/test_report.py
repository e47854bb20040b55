import json

import numpy as np
import pytest

from srckit.harness import BenchConfig, BenchmarkReport, run_benchmark
from srckit.report import emit_report
from srckit.synth import cone_model


@pytest.fixture(scope="module")
def report():
    data = cone_model(2, 10, np.deg2rad(5), np.deg2rad(85), 8, seed=4)
    cfg = BenchConfig(
        solvers=("omp", "marginal"), sparsity_max=3, baseline_dims=2,
        knn_k=3, monte_carlo=2, master_seed=1,
    )
    return run_benchmark(cfg, data)


class TestJsonSink:
    def test_schema_keys(self, report, tmp_path):
        (path,) = emit_report(report, ["json"], tmp_path)
        loaded = json.loads(path.read_text())
        for key in ("config", "solvers", "baselines", "replicate_seeds", "schema_version"):
            assert key in loaded

    def test_roundtrip_reproduces_curves_exactly(self, report, tmp_path):
        (path,) = emit_report(report, ["json"], tmp_path)
        loaded = json.loads(path.read_text())
        for name, res in report.solvers.items():
            for metric in ("L", "dominance_error", "P1", "P2"):
                assert loaded["solvers"][name][metric] == res.mean[metric]
            assert loaded["solvers"][name]["per_replicate"]["L"] == (
                res.per_replicate["L"].tolist()
            )
        for name, res in report.baselines.items():
            assert loaded["baselines"][name]["error"] == res.mean


class TestCsvSink:
    def test_row_count(self, report, tmp_path):
        (path,) = emit_report(report, ["csv"], tmp_path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "series,index,metric,value"
        solver_rows = 2 * 3 * 4  # two solvers, sparsity 3, four metrics
        baseline_rows = 2 * 2  # two baselines, two dimensions
        assert len(rows) - 1 == solver_rows + baseline_rows

    def test_values_parse_back(self, report, tmp_path):
        (path,) = emit_report(report, ["csv"], tmp_path)
        for line in path.read_text().strip().splitlines()[1:]:
            series, idx, metric, value = line.split(",")
            assert int(idx) >= 1
            float(value)


class TestSvgSink:
    def test_deterministic_bytes(self, report, tmp_path):
        (a,) = emit_report(report, ["svg"], tmp_path / "one")
        (b,) = emit_report(report, ["svg"], tmp_path / "two")
        assert a.read_bytes() == b.read_bytes()

    def test_panels_labeled(self, report, tmp_path):
        (path,) = emit_report(report, ["svg"], tmp_path)
        text = path.read_text()
        assert text.lstrip().startswith("<?xml")
        assert "sparsity" in text and "error" in text

    def test_empty_baselines_omit_overlay(self, report, tmp_path):
        bare = BenchmarkReport(
            config=report.config,
            solvers=report.solvers,
            baselines={},
            replicate_seeds=report.replicate_seeds,
            telemetry=report.telemetry,
        )
        (path,) = emit_report(bare, ["svg"], tmp_path / "bare")
        assert path.exists() and path.stat().st_size > 0


def test_unknown_sink_rejected(report, tmp_path):
    with pytest.raises(ValueError):
        emit_report(report, ["pdf"], tmp_path)
