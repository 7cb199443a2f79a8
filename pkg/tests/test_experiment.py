"""Experiment orchestration and on-disk artifacts."""

import csv
import filecmp
import json

import numpy as np
import pytest

import frogfilter.experiment as experiment
from frogfilter.config import read_coefficients, resolve_seeds
from frogfilter.experiment import ARTIFACT_VERSION, run_experiment
from frogfilter.filters import evaluate_response

ARTIFACTS = ("coefficients.json", "response.csv", "history.csv")


def _read_column(path, column):
    with open(path) as fh:
        return [float(row[column]) for row in csv.DictReader(fh)]


def test_artifacts_and_summary_shape(tiny_config, tmp_path):
    out = tmp_path / "out"
    summary = run_experiment(tiny_config, resolve_seeds(tiny_config), out)

    assert (out / "summary.json").is_file()
    for index, run in enumerate(summary["runs"]):
        run_dir = out / f"run-{index:03d}"
        assert run["directory"] == run_dir.name
        for name in ARTIFACTS:
            assert (run_dir / name).is_file()

    assert summary["artifact_version"] == ARTIFACT_VERSION
    assert summary["config_hash"] == tiny_config.config_hash
    assert "numpy" in summary["generator"]
    assert [run["seed"] for run in summary["runs"]] == [0, 1]
    for block in ("mse", "fitness", "module"):
        stats = summary["stats"][block]
        assert stats["min"] <= stats["median"] <= stats["max"]
    modules = [run["module"] for run in summary["runs"]]
    assert summary["best_run_index"] == int(np.argmax(modules))
    # the file on disk is exactly the returned document
    assert json.loads((out / "summary.json").read_text()) == summary


def test_rerun_is_byte_identical(tiny_config, tmp_path):
    seeds = resolve_seeds(tiny_config)
    first = tmp_path / "first"
    second = tmp_path / "second"
    run_experiment(tiny_config, seeds, first)
    run_experiment(tiny_config, seeds, second)

    assert filecmp.cmp(first / "summary.json", second / "summary.json",
                       shallow=False)
    for run_dir in ("run-000", "run-001"):
        for name in ARTIFACTS:
            assert filecmp.cmp(first / run_dir / name, second / run_dir / name,
                               shallow=False), f"{run_dir}/{name} differs"


def test_coefficients_round_trip_to_response_csv(tiny_config, tmp_path):
    out = tmp_path / "out"
    run_experiment(tiny_config, [3], out)
    tf = read_coefficients(out / "run-000" / "coefficients.json")
    recomputed = evaluate_response(tf, tiny_config.problem.grid)
    stored = _read_column(out / "run-000" / "response.csv", "magnitude")
    assert np.max(np.abs(recomputed - np.array(stored))) <= 1e-12
    desired = _read_column(out / "run-000" / "response.csv", "desired")
    assert np.array_equal(desired, tiny_config.problem.desired)


def test_history_csv_is_complete_and_monotone(tiny_config, tmp_path):
    out = tmp_path / "out"
    run_experiment(tiny_config, [0], out)
    path = out / "run-000" / "history.csv"
    with open(path) as fh:
        header = fh.readline().strip()
    assert header == "iteration,best_module,best_fitness,mean_module"
    iterations = _read_column(path, "iteration")
    assert iterations == list(range(1, tiny_config.engine.max_iterations + 1))
    best = _read_column(path, "best_module")
    assert all(b >= a for a, b in zip(best, best[1:]))


def test_baseline_block_contents(tiny_config, tmp_path):
    summary = run_experiment(tiny_config, [0, 1], tmp_path / "out")
    block = summary["baseline"]
    assert block["window"] == "blackman"
    assert block["cutoff"] == 0.25
    assert 0 < block["fitness"] <= 1
    taps = block["coefficients"]["b"]
    assert taps == taps[::-1]  # windowed design stays symmetric
    comparison = block["transition_comparison"]
    assert set(comparison) == {"common_floor_db", "designed", "windowed"}
    assert comparison["common_floor_db"] > 0
    assert summary["quoted"] == {"fitness elsewhere": 0.98}


def test_failed_run_removes_partial_directories(tiny_config, tmp_path, monkeypatch):
    real_run = experiment.run
    calls = {"n": 0}

    def flaky(problem, params):
        calls["n"] += 1
        if calls["n"] == 2:
            raise RuntimeError("simulated failure")
        return real_run(problem, params)

    monkeypatch.setattr(experiment, "run", flaky)
    out = tmp_path / "out"
    with pytest.raises(RuntimeError):
        run_experiment(tiny_config, [0, 1], out)
    assert not list(out.glob("run-*"))
    assert not (out / "summary.json").exists()
