"""Command-line entry points: design, report, and eval."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .baselines import MEASUREMENT_POINTS, measure_metrics
from .config import load_config, read_coefficients, resolve_seeds
from .errors import FrogFilterError, NoCutoffFound
from .experiment import run_experiment
from .filters import FrequencyGrid, evaluate_response, is_stable
from .report import compare_report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frogfilter",
        description="FIR/IIR filter design with a memetic frog-leaping search")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    design = sub.add_parser("design", help="run a design experiment from a JSON config")
    design.add_argument("config", help="experiment config JSON file")
    design.add_argument("--out", metavar="DIR", help="output directory "
                        "(default: config run.output_dir, else ./results)")
    design.add_argument("--seed", type=int, metavar="S",
                        help="base seed, overriding the config and environment")
    design.add_argument("--reps", type=int, metavar="K",
                        help="number of repetitions, overriding the config")
    design.add_argument("--quiet", action="store_true", help="suppress progress output")

    report = sub.add_parser("report", help="render a comparison report from summaries")
    report.add_argument("summaries", nargs="+", metavar="summary.json",
                        help="summary files written by the design command")
    report.add_argument("--out", metavar="DIR", default="report",
                        help="report output directory (default: ./report)")
    report.add_argument("--no-figures", action="store_true",
                        help="skip figure rendering, write only CSV and text")

    evaluate = sub.add_parser("eval", help="evaluate a coefficients file: response + metrics")
    evaluate.add_argument("coefficients", metavar="coeffs.json",
                          help='JSON file {"b": [...], "a": [...]}')
    evaluate.add_argument("--grid", type=int, default=MEASUREMENT_POINTS, metavar="N",
                          help="number of uniform frequency samples (default: %(default)s)")
    evaluate.add_argument("--out", metavar="PATH",
                          help="write the response CSV here instead of stdout")
    return parser


def _cmd_design(args) -> int:
    config = load_config(args.config)
    seeds = resolve_seeds(config, cli_seed=args.seed, cli_reps=args.reps)
    out_dir = args.out or config.output_dir or "results"
    log = (lambda msg: None) if args.quiet else (lambda msg: print(msg))
    summary = run_experiment(config, seeds, out_dir, log=log)
    stats = summary["stats"]
    log(f"{len(seeds)} run(s) -> {Path(out_dir) / 'summary.json'}")
    log(f"mse min/median/max: {stats['mse']['min']:.6e} / "
        f"{stats['mse']['median']:.6e} / {stats['mse']['max']:.6e}")
    return 0


def _cmd_report(args) -> int:
    result = compare_report(args.summaries, args.out, figures=not args.no_figures)
    print(result["text"].read_text(), end="")
    names = [result["csv"].name, result["text"].name]
    names += [p.name for p in result["figures"]]
    print(f"wrote {', '.join(names)} to {Path(args.out)}")
    return 0


def _cmd_eval(args) -> int:
    tf = read_coefficients(args.coefficients)
    if args.grid < 2:
        raise FrogFilterError(f"--grid must be at least 2, got {args.grid}")
    grid = FrequencyGrid.uniform(args.grid)
    magnitude = evaluate_response(tf, grid)

    print(f"# numerator taps: {tf.b.size}  denominator taps: {tf.a.size}")
    print(f"# stable: {'yes' if is_stable(tf) else 'no'}")
    print(f"# dc gain: {magnitude[0]:.6g}")
    try:
        metrics = measure_metrics(tf, grid)
        print(f"# passband ripple: {metrics.passband_ripple_db:.4f} dB")
        print(f"# stopband attenuation: {metrics.stopband_attenuation_db:.4f} dB")
        print(f"# cutoff (-1 dB): {metrics.cutoff_freq:.6g}")
        print(f"# transition bandwidth: {metrics.transition_bandwidth:.6g}")
    except NoCutoffFound as exc:
        print(f"# metrics unavailable: {exc}")

    lines = ["omega,magnitude"]
    for w, m in zip(grid.omega, magnitude):
        lines.append(f"{format(w, '.17g')},{format(m, '.17g')}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"# response written to {args.out}")
    else:
        print(text, end="")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"design": _cmd_design, "report": _cmd_report, "eval": _cmd_eval}
    try:
        return handlers[args.command](args)
    except (FrogFilterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
