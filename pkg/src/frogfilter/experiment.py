"""Seeded experiment orchestration and artifact emission.

Each repetition runs the engine with its own recorded seed and writes a
per-run directory (coefficients JSON, response CSV, convergence CSV); a
single summary.json with per-run results and aggregate statistics is
written after all runs finish.  Artifacts carry no timestamps and floats
are serialized at full round-trip precision, so identical config + seeds
reproduce byte-identical files.
"""

from __future__ import annotations

import dataclasses
import json
import shutil
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__, objective
from .baselines import (
    FilterMetrics,
    compare_transition,
    measure_metrics,
    windowed_fir,
)
from .config import ExperimentConfig
from .engine import DesignProblem, EngineParams, RunResult, rng_description, run
from .errors import NoCutoffFound
from .filters import BAND_NAMES, Band, TransferFunction, evaluate_response

ARTIFACT_VERSION = f"frogfilter-{__version__}"


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def write_coefficients(path: Path, tf: TransferFunction) -> None:
    doc = {"b": [float(v) for v in tf.b], "a": [float(v) for v in tf.a]}
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def write_response_csv(path: Path, omega, magnitude, desired, mask) -> None:
    lines = ["omega,magnitude,desired,band"]
    for w, m, d, band in zip(omega, magnitude, desired, mask):
        lines.append(f"{_fmt(w)},{_fmt(m)},{_fmt(d)},{BAND_NAMES[Band(band)]}")
    path.write_text("\n".join(lines) + "\n")


def write_history_csv(path: Path, history) -> None:
    lines = ["iteration,best_module,best_fitness,mean_module"]
    for i, rec in enumerate(history, start=1):
        lines.append(f"{i},{_fmt(rec.best_norm)},{_fmt(rec.best_fitness)},"
                     f"{_fmt(rec.mean_norm)}")
    path.write_text("\n".join(lines) + "\n")


def _metrics_dict(metrics: FilterMetrics) -> dict:
    return {
        "passband_ripple_db": metrics.passband_ripple_db,
        "stopband_attenuation_db": metrics.stopband_attenuation_db,
        "cutoff_freq": metrics.cutoff_freq,
        "transition_bandwidth": metrics.transition_bandwidth,
    }


def _try_metrics(tf: TransferFunction) -> dict | None:
    try:
        return _metrics_dict(measure_metrics(tf))
    except NoCutoffFound:
        return None


def _target_summary(problem: DesignProblem) -> dict:
    target = problem.target
    if target.mode == "reference":
        return {
            "type": "reference",
            "b": [float(v) for v in target.reference.b],
            "a": [float(v) for v in target.reference.a],
        }
    return {
        "type": "ideal",
        "band": target.band_kind,
        "edges": [[p, s] for p, s in target.edges],
    }


def _engine_summary(params: EngineParams) -> dict:
    return {
        "max_iterations": params.max_iterations,
        "leaps_per_memeplex": params.leaps_per_memeplex,
        "num_memeplexes": params.num_memeplexes,
        "population": params.population,
        "c_max": params.c_max,
        "c_min": params.c_min,
        "coeff_bound": params.coeff_bound,
        "stagnation_window": params.stagnation_window,
        "mutation_sigma": params.mutation_sigma,
        "per_coordinate_rand": params.per_coordinate_rand,
    }


def _stats(values) -> dict:
    arr = np.asarray(values, dtype=float)
    return {"min": float(arr.min()), "median": float(np.median(arr)),
            "max": float(arr.max())}


def _baseline_block(config: ExperimentConfig, best_tf: TransferFunction) -> dict:
    spec = config.baseline
    problem = config.problem
    baseline_tf = windowed_fir(problem.numerator_order, spec.cutoff, spec.window)
    mag = evaluate_response(baseline_tf, problem.grid)
    block = {
        "window": spec.window,
        "cutoff": spec.cutoff,
        "order": problem.numerator_order,
        "fitness": objective.scalar_report_fitness(mag, problem.desired, problem.mask),
        "metrics": _try_metrics(baseline_tf),
        "coefficients": {"b": [float(v) for v in baseline_tf.b], "a": [1.0]},
    }
    try:
        best_tbw, base_tbw, floor = compare_transition(best_tf, baseline_tf)
        block["transition_comparison"] = {
            "common_floor_db": floor,
            "designed": best_tbw,
            "windowed": base_tbw,
        }
    except NoCutoffFound:
        block["transition_comparison"] = None
    return block


def run_experiment(config: ExperimentConfig, seeds: list[int], out_dir: str | Path,
                   log: Callable[[str], None] = lambda msg: None) -> dict:
    """Execute all repetitions and write artifacts under out_dir.

    Returns the summary document (also written to out_dir/summary.json).
    Partially written run directories are removed if any run fails.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    problem = config.problem
    created: list[Path] = []
    runs = []
    best_result: RunResult | None = None
    try:
        for index, seed in enumerate(seeds):
            params = dataclasses.replace(config.engine, rng_seed=seed)
            result = run(problem, params)
            run_dir = out / f"run-{index:03d}"
            run_dir.mkdir(exist_ok=True)
            created.append(run_dir)

            tf = problem.decode(result.best.position)
            write_coefficients(run_dir / "coefficients.json", tf)
            magnitude = problem.response(result.best.position)
            write_response_csv(run_dir / "response.csv", problem.grid.omega,
                               magnitude, problem.desired, problem.mask)
            write_history_csv(run_dir / "history.csv", result.history)

            costs = result.best.costs
            mse = objective.pool_costs(costs, problem.n_pass, problem.n_stop)
            runs.append({
                "seed": seed,
                "directory": run_dir.name,
                "mse": mse,
                "fitness": problem.scalar_fitness(costs),
                "module": result.best.norm,
                "j_pass": costs.j_pass,
                "j_stop": costs.j_stop,
                "evaluations": result.evaluations,
                "metrics": _try_metrics(tf),
            })
            if best_result is None or result.best.norm > best_result.best.norm:
                best_result = result
            log(f"run {index}: seed={seed} mse={mse:.6e} "
                f"fitness={runs[-1]['fitness']:.6f}")
    except Exception:
        for path in created:
            shutil.rmtree(path, ignore_errors=True)
        raise

    summary = {
        "artifact_version": ARTIFACT_VERSION,
        "config_hash": config.config_hash,
        "generator": rng_description(),
        "problem": {
            "kind": problem.kind,
            "numerator_order": problem.numerator_order,
            "denominator_order": problem.denominator_order,
            "grid_points": problem.grid.count,
            "target": _target_summary(problem),
        },
        "engine": _engine_summary(config.engine),
        "runs": runs,
        "best_run_index": max(range(len(runs)), key=lambda i: runs[i]["module"]),
        "stats": {
            "mse": _stats([r["mse"] for r in runs]),
            "fitness": _stats([r["fitness"] for r in runs]),
            "module": _stats([r["module"] for r in runs]),
        },
        "baseline": None,
        "quoted": config.quoted,
    }
    if config.baseline is not None:
        best_tf = problem.decode(best_result.best.position)
        summary["baseline"] = _baseline_block(config, best_tf)

    (out / "summary.json").write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return summary
