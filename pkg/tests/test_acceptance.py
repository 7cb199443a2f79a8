"""Acceptance checks for the whole toolkit.

Six end-to-end criteria, one test each, every one printing a PASS/FAIL
line to the terminal (capture is disabled for those lines).  The IIR
order sweep is the slow one; the full module takes on the order of
twenty minutes on a laptop.
"""

import filecmp
import math
import time

import numpy as np
import pytest

from frogfilter.baselines import (
    compare_transition,
    measure_metrics,
    windowed_fir,
)
from frogfilter.config import load_config, resolve_seeds
from frogfilter.engine import (
    DesignProblem,
    EngineParams,
    run,
    shannon_entropy,
)
from frogfilter.errors import NoCutoffFound
from frogfilter.experiment import run_experiment
from frogfilter.filters import (
    Band,
    DesignTarget,
    FrequencyGrid,
    TransferFunction,
    evaluate_response,
    is_stable,
    schur_cohn_stable,
)
from frogfilter.objective import band_mse, fitness, pool_costs
from conftest import write_config

# fixed fifth-order reference filter used by the matching benchmark
REF_B = [0.1084, 0.5419, 1.0837, 1.0837, 0.5419, 0.1084]
REF_A = [1.0, 0.9853, 0.9738, 0.3864, 0.1112, 0.0113]

SEEDS = (0, 1, 2, 3, 4)


def _verdict(capsys, name, ok, detail):
    line = f"{name}: {'PASS' if ok else 'FAIL'} — {detail}"
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


def _reference_problem():
    tf = TransferFunction(b=np.array(REF_B), a=np.array(REF_A))
    return DesignProblem(kind="iir", numerator_order=4, denominator_order=4,
                         target=DesignTarget.from_reference(tf))


@pytest.fixture(scope="module")
def reference_runs():
    problem = _reference_problem()
    started = time.perf_counter()
    results = [run(problem, EngineParams(rng_seed=seed)) for seed in SEEDS]
    elapsed = time.perf_counter() - started
    return problem, results, elapsed


@pytest.fixture(scope="module")
def fir_runs():
    """Five seeded runs per order for the ideal quarter-band lowpass."""
    runs = {}
    for order in (10, 15, 20):
        problem = DesignProblem(kind="fir", numerator_order=order,
                                target=DesignTarget.low_pass(0.25))
        results = [run(problem, EngineParams(rng_seed=seed)) for seed in SEEDS]
        runs[order] = (problem, results)
    return runs


def test_criterion_1_reference_matching_benchmark(reference_runs, capsys):
    problem, results, elapsed = reference_runs
    mses = [pool_costs(r.best.costs, problem.n_pass, problem.n_stop)
            for r in results]
    median, best, worst = np.median(mses), min(mses), max(mses)
    ok = median <= 1.5e-3 and best <= 8e-4 and worst <= 5e-3 and elapsed <= 60.0
    _verdict(capsys, "criterion 1 (reference match, 5 seeds)", ok,
             f"median mse {median:.3e} (<=1.5e-3), best {best:.3e} (<=8e-4), "
             f"worst {worst:.3e} (<=5e-3), {elapsed:.1f}s (<=60s)")


def test_criterion_2_fir_fitness_beats_windowing(fir_runs, capsys):
    details = []
    ok = True
    for order, (problem, results) in fir_runs.items():
        baseline = windowed_fir(order, 0.25)
        base_fit = fitness(pool_costs(
            band_mse(evaluate_response(baseline, problem.grid),
                     problem.desired, problem.mask),
            problem.n_pass, problem.n_stop))
        fits = [problem.scalar_fitness(r.best.costs) for r in results]
        wins = sum(f > base_fit for f in fits)
        ok = ok and wins >= 4
        details.append(f"order {order}: {wins}/5 above windowed "
                       f"{base_fit:.4f} (median {np.median(fits):.4f})")
    _verdict(capsys, "criterion 2 (FIR fitness vs windowing)", ok,
             "; ".join(details))


def test_criterion_3_transition_bandwidth(fir_runs, capsys):
    problem, results = fir_runs[20]
    baseline = windowed_fir(20, 0.25)
    wins = 0
    designed_widths = []
    for result in results:
        designed = problem.decode(result.best.position)
        try:
            d_tbw, w_tbw, _ = compare_transition(designed, baseline)
        except NoCutoffFound:
            continue  # no usable common floor counts as a loss
        designed_widths.append(d_tbw)
        wins += d_tbw < w_tbw
    windowed_widths = [measure_metrics(windowed_fir(order, 0.25)).transition_bandwidth
                       for order in (5, 10, 15, 20)]
    monotone = all(b <= a for a, b in zip(windowed_widths, windowed_widths[1:]))
    ok = wins >= 4 and monotone
    _verdict(capsys, "criterion 3 (transition bandwidth, order 20)", ok,
             f"{wins}/5 designed runs narrower (median designed "
             f"{np.median(designed_widths):.3f} vs windowed {windowed_widths[-1]:.3f}); "
             f"windowed widths 5->20 {['%.3f' % w for w in windowed_widths]} "
             f"monotone={monotone}")


def test_criterion_4_iir_fitness_grows_with_order(capsys):
    # the evaluation budget scales with the square of the coefficient count
    # so higher-order searches are trained as thoroughly as low-order ones
    medians = []
    for order in (5, 10, 15, 20, 25):
        problem = DesignProblem(kind="iir", numerator_order=order,
                                denominator_order=order,
                                target=DesignTarget.low_pass(0.25))
        iterations = math.ceil(1.5 * problem.dim ** 2)
        fits = []
        for seed in SEEDS:
            params = EngineParams(max_iterations=iterations, population=80,
                                  num_memeplexes=10, rng_seed=seed)
            result = run(problem, params)
            fits.append(problem.scalar_fitness(result.best.costs))
        medians.append(float(np.median(fits)))
    monotone = all(b >= a for a, b in zip(medians, medians[1:]))
    ok = monotone and medians[-1] >= 0.99
    _verdict(capsys, "criterion 4 (IIR fitness vs order)", ok,
             f"medians {['%.4f' % m for m in medians]}, monotone={monotone}, "
             f"order-25 {medians[-1]:.4f} (>=0.99)")


def test_criterion_5_invariant_suite(reference_runs, tmp_path, capsys):
    problem, results, _ = reference_runs
    parts = []

    # (a) emitted IIR filters are stable, and the stability test agrees with
    # a brute-force root check on random denominators
    stable_ok = all(is_stable(problem.decode(r.best.position)) for r in results)
    rng = np.random.default_rng(101)
    agree = 0
    total = 0
    while total < 100:
        a = np.concatenate(([1.0], rng.uniform(-1.5, 1.5, rng.integers(1, 7))))
        top = np.max(np.abs(np.roots(a)))
        if abs(top - 1.0) < 1e-9:
            continue
        agree += schur_cohn_stable(a) == (top < 1.0)
        total += 1
    stable_ok = stable_ok and agree == 100
    parts.append(f"(a) stability {agree}/100 root-check agreement")

    # (b) best-module history is non-decreasing over 20 fresh seeds
    small = DesignProblem(kind="fir", numerator_order=8,
                          target=DesignTarget.low_pass(0.25),
                          grid=FrequencyGrid.uniform(64))
    monotone_ok = True
    for seed in range(20):
        history = run(small, EngineParams(max_iterations=60, population=20,
                                          num_memeplexes=4, rng_seed=seed)).history
        norms = [rec.best_norm for rec in history]
        monotone_ok = monotone_ok and all(b >= a for a, b in zip(norms, norms[1:]))
    parts.append(f"(b) history monotone on 20 seeds: {monotone_ok}")

    # (c) fitness and entropy stay inside their ranges under fuzzing
    fuzz = np.random.default_rng(7)
    range_ok = all(0.0 < fitness(j) <= 1.0 for j in fuzz.uniform(0, 1e6, 1000))
    for _ in range(500):
        n = int(fuzz.integers(1, 40))
        h = shannon_entropy(fuzz.uniform(0, 5, n))
        range_ok = range_ok and (0.0 <= h <= math.log2(n) + 1e-12)
    parts.append(f"(c) fitness/entropy ranges: {range_ok}")

    # (d) band costs match a naive double-loop oracle on 50 random fixtures
    def naive_costs(obtained, desired, mask):
        sums = {Band.PASS: [0.0, 0], Band.STOP: [0.0, 0]}
        for o, d, m in zip(obtained, desired, mask):
            if m in sums:
                sums[m][0] += (d - o) ** 2
                sums[m][1] += 1
        j_pass = sums[Band.PASS][0] / sums[Band.PASS][1]
        if sums[Band.STOP][1]:
            return j_pass, sums[Band.STOP][0] / sums[Band.STOP][1]
        return j_pass, j_pass

    oracle_ok = True
    for _ in range(50):
        n = int(fuzz.integers(4, 64))
        mask = fuzz.choice([Band.PASS, Band.STOP, Band.TRANSITION], n)
        mask[fuzz.integers(0, n)] = Band.PASS  # at least one scored passband point
        desired = fuzz.uniform(0, 1, n)
        obtained = fuzz.uniform(0, 2, n)
        got = band_mse(obtained, desired, mask)
        want = naive_costs(obtained, desired, mask)
        oracle_ok = (oracle_ok and abs(got.j_pass - want[0]) <= 1e-12
                     and abs(got.j_stop - want[1]) <= 1e-12)
    parts.append(f"(d) band cost oracle 50 fixtures: {oracle_ok}")

    # (e) identical seed and config produce byte-identical artifacts
    config = load_config(write_config(tmp_path))
    seeds = resolve_seeds(config)
    run_experiment(config, seeds, tmp_path / "first")
    run_experiment(config, seeds, tmp_path / "second")
    det_ok = filecmp.cmp(tmp_path / "first" / "summary.json",
                         tmp_path / "second" / "summary.json", shallow=False)
    for name in ("coefficients.json", "response.csv", "history.csv"):
        det_ok = det_ok and filecmp.cmp(tmp_path / "first" / "run-000" / name,
                                        tmp_path / "second" / "run-000" / name,
                                        shallow=False)
    parts.append(f"(e) byte-identical artifacts: {det_ok}")

    ok = stable_ok and monotone_ok and range_ok and oracle_ok and det_ok
    _verdict(capsys, "criterion 5 (invariant suite)", ok, "; ".join(parts))


def test_criterion_6_dc_gain(capsys):
    tf = TransferFunction(b=np.array(REF_B), a=np.array(REF_A))
    dc = evaluate_response(tf, FrequencyGrid.uniform(16))[0]
    oracle = sum(REF_B) / sum(REF_A)  # H(z=1) is the coefficient-sum ratio
    ok = abs(dc - 1.0) <= 1e-3 and abs(dc - oracle) <= 1e-12
    _verdict(capsys, "criterion 6 (DC gain)", ok,
             f"dc {dc:.6f} within 1.0+/-1e-3, coefficient-sum oracle {oracle:.6f}")
