"""Digital FIR/IIR filter design via a memetic frog-leaping search."""

__version__ = "0.1.0"

from .filters import (
    Band,
    DesignTarget,
    FrequencyGrid,
    TransferFunction,
    evaluate_response,
    ideal_response,
    is_stable,
)
from .objective import (
    CostPair,
    FitnessPoint,
    band_mse,
    fitness,
    fitness_norm,
    fitness_point,
    scalar_report_fitness,
)
from .engine import DesignProblem, EngineParams, RunResult, run
from .baselines import FilterMetrics, compare_transition, measure_metrics, windowed_fir
from .config import ExperimentConfig, load_config, read_coefficients, resolve_seeds
from .experiment import run_experiment
from .report import compare_report

__all__ = [
    "Band",
    "CostPair",
    "DesignProblem",
    "DesignTarget",
    "EngineParams",
    "ExperimentConfig",
    "FilterMetrics",
    "FitnessPoint",
    "FrequencyGrid",
    "RunResult",
    "TransferFunction",
    "band_mse",
    "compare_report",
    "compare_transition",
    "evaluate_response",
    "fitness",
    "fitness_norm",
    "fitness_point",
    "ideal_response",
    "is_stable",
    "load_config",
    "measure_metrics",
    "read_coefficients",
    "resolve_seeds",
    "run",
    "run_experiment",
    "scalar_report_fitness",
    "windowed_fir",
    "__version__",
]
