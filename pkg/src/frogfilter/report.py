"""Comparison reports over experiment summaries.

Renders one table row per summary (CSV plus aligned text) and, unless
disabled, a response figure and a convergence figure per summary from the
stored per-run artifacts.  This module only formats what run_experiment
wrote — it never recomputes filter responses or statistics.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .errors import MissingFile, ParseError, SchemaMismatch

_REQUIRED_KEYS = {"artifact_version", "problem", "runs", "stats", "best_run_index"}

_METRIC_COLUMNS = [
    ("ripple_db", "passband_ripple_db"),
    ("attenuation_db", "stopband_attenuation_db"),
    ("cutoff", "cutoff_freq"),
    ("transition_bw", "transition_bandwidth"),
]


def load_summary(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"summary file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or not _REQUIRED_KEYS.issubset(doc):
        missing = sorted(_REQUIRED_KEYS - set(doc)) if isinstance(doc, dict) else []
        raise SchemaMismatch(f"{path} is not an experiment summary "
                             f"(missing: {', '.join(missing) or 'object'})")
    doc["_path"] = path
    return doc


def _label(doc: dict, index: int) -> str:
    problem = doc["problem"]
    return f"{index:02d}-{problem['kind']}{problem['numerator_order']}"


def build_rows(summaries: list[dict]) -> tuple[list[str], list[dict]]:
    """Flatten summaries into table rows; quoted reference values become
    their own columns suffixed with ' [paper-quoted]'."""
    versions = {doc["artifact_version"] for doc in summaries}
    if len(versions) > 1:
        raise SchemaMismatch(f"summaries from mixed artifact versions: {sorted(versions)}")
    quoted_labels: list[str] = []
    for doc in summaries:
        for key in doc.get("quoted", {}):
            if key not in quoted_labels:
                quoted_labels.append(key)

    header = ["experiment", "kind", "order", "runs",
              "fitness_median", "fitness_best", "mse_median", "mse_min"]
    header += [name for name, _ in _METRIC_COLUMNS]
    header += ["baseline_fitness", "baseline_transition_bw", "designed_transition_bw"]
    header += [f"{label} [paper-quoted]" for label in quoted_labels]

    rows = []
    for index, doc in enumerate(summaries):
        problem = doc["problem"]
        stats = doc["stats"]
        best = doc["runs"][doc["best_run_index"]]
        row = {
            "experiment": _label(doc, index),
            "kind": problem["kind"],
            "order": problem["numerator_order"],
            "runs": len(doc["runs"]),
            "fitness_median": stats["fitness"]["median"],
            "fitness_best": stats["fitness"]["max"],
            "mse_median": stats["mse"]["median"],
            "mse_min": stats["mse"]["min"],
        }
        metrics = best.get("metrics") or {}
        for name, key in _METRIC_COLUMNS:
            row[name] = metrics.get(key, "")
        baseline = doc.get("baseline")
        row["baseline_fitness"] = baseline["fitness"] if baseline else ""
        comparison = (baseline or {}).get("transition_comparison")
        row["baseline_transition_bw"] = comparison["windowed"] if comparison else ""
        row["designed_transition_bw"] = comparison["designed"] if comparison else ""
        quoted = doc.get("quoted", {})
        for label in quoted_labels:
            row[f"{label} [paper-quoted]"] = quoted.get(label, "")
        rows.append(row)
    return header, rows


def _cell(value, precise: bool) -> str:
    if value == "":
        return ""
    if isinstance(value, float):
        return format(value, ".17g") if precise else format(value, ".6g")
    return str(value)


def render_csv(header: list[str], rows: list[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row[col], precise=True) for col in header])
    return buffer.getvalue()


def render_text(header: list[str], rows: list[dict]) -> str:
    table = [header] + [[_cell(row[col], precise=False) for col in header] for row in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(header))]
    out = []
    for line in table:
        out.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip())
    out.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(out) + "\n"


def _read_csv_columns(path: Path) -> dict[str, list]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        columns: dict[str, list] = {name: [] for name in reader.fieldnames}
        for record in reader:
            for name, value in record.items():
                columns[name].append(value)
    return columns


def render_figures(summaries: list[dict], out_dir: Path) -> list[Path]:
    """Response and convergence PNGs per summary, from the run artifacts."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    for index, doc in enumerate(summaries):
        base = doc["_path"].parent
        label = _label(doc, index)

        best = doc["runs"][doc["best_run_index"]]
        response = _read_csv_columns(base / best["directory"] / "response.csv")
        omega = [float(v) for v in response["omega"]]
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        ax.plot(omega, [float(v) for v in response["magnitude"]],
                label=f"designed (seed {best['seed']})")
        ax.plot(omega, [float(v) for v in response["desired"]],
                linestyle="--", label="desired")
        ax.set_xlabel("normalized frequency (1 = Nyquist)")
        ax.set_ylabel("magnitude")
        ax.set_title(label)
        ax.legend()
        fig.tight_layout()
        path = out_dir / f"fig_{label}_response.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        for run_info in doc["runs"]:
            history = _read_csv_columns(base / run_info["directory"] / "history.csv")
            ax.plot([int(v) for v in history["iteration"]],
                    [float(v) for v in history["best_module"]],
                    label=f"seed {run_info['seed']}")
        ax.set_xlabel("iteration")
        ax.set_ylabel("best module")
        ax.set_title(f"{label} convergence")
        ax.legend(fontsize="small")
        fig.tight_layout()
        path = out_dir / f"fig_{label}_convergence.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written


def compare_report(summary_paths, out_dir: str | Path, figures: bool = True) -> dict:
    """Build the comparison table (CSV + text) and optional figures.

    Returns {"csv": path, "text": path, "figures": [paths]}.
    """
    summaries = [load_summary(p) for p in summary_paths]
    header, rows = build_rows(summaries)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    csv_path = out / "report.csv"
    csv_path.write_text(render_csv(header, rows))
    text_path = out / "report.txt"
    text_path.write_text(render_text(header, rows))
    result = {"csv": csv_path, "text": text_path, "figures": []}
    if figures:
        result["figures"] = render_figures(summaries, out)
    return result
