"""Experiment configuration: strict JSON ingestion and seed planning.

A config document has a required "problem" block and optional "engine",
"run", "baseline", and "quoted" blocks.  Key checking is strict — any key
outside the schema is an error, so typos cannot silently fall back to
defaults.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .engine import DesignProblem, EngineParams
from .errors import (
    ConfigError,
    MissingFile,
    ParseError,
    SchemaMismatch,
    UnknownKey,
)
from .filters import DesignTarget, FrequencyGrid, TransferFunction

SEED_ENV_VAR = "FROGFILTER_SEED"

_ENGINE_KEYS = {f.name for f in dataclasses.fields(EngineParams)}
_PROBLEM_KEYS = {"kind", "numerator_order", "denominator_order", "grid_points", "target"}
_TARGET_KEYS = {"type", "band", "pass_edge", "stop_edge", "pass_edges", "stop_edges",
                "coefficients"}
_RUN_KEYS = {"repetitions", "seeds", "base_seed", "output_dir"}
_BASELINE_KEYS = {"window", "cutoff"}
_TOP_KEYS = {"problem", "engine", "run", "baseline", "quoted"}


@dataclass(frozen=True)
class BaselineSpec:
    """Windowed-FIR comparison attached to an experiment."""

    window: str = "blackman"
    cutoff: float = 0.25


@dataclass
class ExperimentConfig:
    problem: DesignProblem
    engine: EngineParams
    repetitions: int
    seeds: tuple[int, ...] | None
    base_seed: int | None
    output_dir: str | None
    baseline: BaselineSpec | None
    quoted: dict[str, float]
    config_hash: str
    raw: dict


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigError(f"missing required key {key!r} in {where}")
    return mapping[key]


def _check_keys(mapping: dict, allowed: set[str], where: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise UnknownKey(f"unknown key {key!r} in {where} "
                             f"(allowed: {', '.join(sorted(allowed))})")


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def read_coefficients(path: str | Path) -> TransferFunction:
    """Load a coefficients JSON file ({"b": [...], "a": [...]})."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"coefficients file not found: {path}")
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "b" not in doc:
        raise SchemaMismatch(f"{path}: expected an object with 'b' (and optional 'a') arrays")
    extra = set(doc) - {"b", "a"}
    if extra:
        raise SchemaMismatch(f"{path}: unexpected key {sorted(extra)[0]!r}")
    try:
        b = np.asarray([float(v) for v in doc["b"]])
        a = np.asarray([float(v) for v in doc.get("a", [1.0])])
    except (TypeError, ValueError) as exc:
        raise SchemaMismatch(f"{path}: coefficient arrays must be numeric") from exc
    return TransferFunction(b=b, a=a)


def _parse_target(block: dict, base_dir: Path) -> DesignTarget:
    if not isinstance(block, dict):
        raise ConfigError("problem.target must be an object")
    _check_keys(block, _TARGET_KEYS, "problem.target")
    kind = _require(block, "type", "problem.target")
    if kind == "reference":
        rel = _require(block, "coefficients", "problem.target")
        for key in ("band", "pass_edge", "stop_edge", "pass_edges", "stop_edges"):
            if key in block:
                raise ConfigError(f"problem.target.{key} does not apply to a reference target")
        return DesignTarget.from_reference(read_coefficients(base_dir / rel))
    if kind != "ideal":
        raise ConfigError(f"problem.target.type must be 'ideal' or 'reference', got {kind!r}")
    band = str(_require(block, "band", "problem.target")).lower()
    if "coefficients" in block:
        raise ConfigError("problem.target.coefficients does not apply to an ideal target")
    try:
        if band in ("lowpass", "highpass"):
            for key in ("pass_edges", "stop_edges"):
                if key in block:
                    raise ConfigError(f"{band} targets use pass_edge/stop_edge, not {key}")
            p = _as_number(_require(block, "pass_edge", "problem.target"), "pass_edge")
            s = _as_number(block.get("stop_edge", p), "stop_edge")
            return DesignTarget.ideal(band, [(p, s)])
        for key in ("pass_edge", "stop_edge"):
            if key in block:
                raise ConfigError(f"{band} targets use pass_edges/stop_edges, not {key}")
        p = [_as_number(v, "pass_edges") for v in _require(block, "pass_edges", "problem.target")]
        s = [_as_number(v, "stop_edges") for v in _require(block, "stop_edges", "problem.target")]
        if len(p) != 2 or len(s) != 2:
            raise ConfigError(f"{band} targets need two pass edges and two stop edges")
        return DesignTarget.ideal(band, [(p[0], s[0]), (p[1], s[1])])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_problem(block: dict, base_dir: Path) -> DesignProblem:
    if not isinstance(block, dict):
        raise ConfigError("problem must be an object")
    _check_keys(block, _PROBLEM_KEYS, "problem")
    kind = str(_require(block, "kind", "problem")).lower()
    num = _as_int(_require(block, "numerator_order", "problem"), "numerator_order")
    den = _as_int(block.get("denominator_order", 1 if kind == "iir" else 0),
                  "denominator_order")
    points = _as_int(block.get("grid_points", 128), "grid_points")
    if points < 2:
        raise ConfigError(f"grid_points must be at least 2, got {points}")
    target = _parse_target(_require(block, "target", "problem"), base_dir)
    return DesignProblem(kind=kind, numerator_order=num, denominator_order=den,
                         target=target, grid=FrequencyGrid.uniform(points))


def _parse_engine(block: dict) -> EngineParams:
    if not isinstance(block, dict):
        raise ConfigError("engine must be an object")
    _check_keys(block, _ENGINE_KEYS, "engine")
    kwargs = {}
    for key, value in block.items():
        if key == "per_coordinate_rand":
            if not isinstance(value, bool):
                raise ConfigError(f"engine.{key} must be a boolean, got {value!r}")
            kwargs[key] = value
        elif key in ("c_max", "c_min", "coeff_bound", "mutation_sigma"):
            kwargs[key] = _as_number(value, f"engine.{key}")
        else:
            kwargs[key] = _as_int(value, f"engine.{key}")
    params = EngineParams(**kwargs)
    params.validate()
    return params


def _parse_baseline(block: dict, problem: DesignProblem) -> BaselineSpec:
    if not isinstance(block, dict):
        raise ConfigError("baseline must be an object")
    _check_keys(block, _BASELINE_KEYS, "baseline")
    window = str(block.get("window", "blackman"))
    if "cutoff" in block:
        cutoff = _as_number(block["cutoff"], "baseline.cutoff")
    else:
        target = problem.target
        if target.mode != "ideal" or target.band_kind != "lowpass":
            raise ConfigError("baseline.cutoff is required unless the target is an ideal lowpass")
        cutoff = target.edges[0][0]
    if not (0.0 < cutoff < 1.0):
        raise ConfigError(f"baseline.cutoff must lie in (0, 1), got {cutoff}")
    return BaselineSpec(window=window, cutoff=cutoff)


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate an experiment config JSON file."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"config file not found: {path}")
    text = path.read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    _check_keys(doc, _TOP_KEYS, "config")

    base_dir = path.parent
    problem = _parse_problem(_require(doc, "problem", "config"), base_dir)
    engine = _parse_engine(doc.get("engine", {}))

    run_block = doc.get("run", {})
    if not isinstance(run_block, dict):
        raise ConfigError("run must be an object")
    _check_keys(run_block, _RUN_KEYS, "run")
    reps = _as_int(run_block.get("repetitions", 1), "run.repetitions")
    if reps < 1:
        raise ConfigError(f"run.repetitions must be at least 1, got {reps}")
    seeds = None
    if "seeds" in run_block:
        raw_seeds = run_block["seeds"]
        if not isinstance(raw_seeds, list) or not raw_seeds:
            raise ConfigError("run.seeds must be a non-empty list of integers")
        seeds = tuple(_as_int(s, "run.seeds") for s in raw_seeds)
    base_seed = None
    if "base_seed" in run_block:
        if seeds is not None:
            raise ConfigError("run.seeds and run.base_seed are mutually exclusive")
        base_seed = _as_int(run_block["base_seed"], "run.base_seed")
    output_dir = run_block.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise ConfigError("run.output_dir must be a string path")

    baseline = None
    if "baseline" in doc:
        baseline = _parse_baseline(doc["baseline"], problem)

    quoted = {}
    if "quoted" in doc:
        block = doc["quoted"]
        if not isinstance(block, dict):
            raise ConfigError("quoted must be an object of label -> number")
        quoted = {str(k): _as_number(v, f"quoted.{k}") for k, v in block.items()}

    digest = hashlib.sha256(
        json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    return ExperimentConfig(problem=problem, engine=engine, repetitions=reps,
                            seeds=seeds, base_seed=base_seed, output_dir=output_dir,
                            baseline=baseline, quoted=quoted, config_hash=digest,
                            raw=doc)


def resolve_seeds(config: ExperimentConfig, cli_seed: int | None = None,
                  cli_reps: int | None = None) -> list[int]:
    """Per-run seeds under the precedence: --seed flag, then the config's
    seed list or base, then the engine block's rng_seed, then the
    FROGFILTER_SEED environment variable, then 0."""
    reps = cli_reps if cli_reps is not None else config.repetitions
    if reps < 1:
        raise ConfigError(f"repetition count must be at least 1, got {reps}")
    if cli_seed is None and config.seeds is not None:
        if len(config.seeds) < reps:
            raise ConfigError(f"run.seeds lists {len(config.seeds)} seeds "
                              f"but {reps} repetitions were requested")
        return list(config.seeds[:reps])
    if cli_seed is not None:
        base = cli_seed
    elif config.base_seed is not None:
        base = config.base_seed
    elif "rng_seed" in config.raw.get("engine", {}):
        base = config.engine.rng_seed
    else:
        env = os.environ.get(SEED_ENV_VAR)
        if env is not None:
            try:
                base = int(env)
            except ValueError:
                raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
        else:
            base = 0
    return [base + k for k in range(reps)]
