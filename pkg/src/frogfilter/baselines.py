"""Windowed FIR reference designs and dB-domain filter measurements.

The windowing baseline is the classical truncated-sinc low-pass multiplied
by a Blackman window.  Measurements work on a dense magnitude response: the
cutoff is the first point 1 dB under the passband reference, the stopband
floor is located at the first local minimum past the cutoff, and the
transition bandwidth spans from the cutoff to the first point at or below
the attenuation level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InvalidCutoff, NoCutoffFound
from .filters import FrequencyGrid, TransferFunction, evaluate_response

# dB floor substituted for log10(0); far below any measurable attenuation
_DB_FLOOR = -400.0
_CUTOFF_DB = -1.0

#: dense grid used for dB measurements regardless of the optimization grid
MEASUREMENT_POINTS = 1024

_WINDOWS = {
    "blackman": np.blackman,
    "hamming": np.hamming,
    "hann": np.hanning,
    "rect": np.ones,
}


@dataclass(frozen=True)
class FilterMetrics:
    """dB-domain summary of a magnitude response."""

    passband_ripple_db: float
    stopband_attenuation_db: float
    cutoff_freq: float
    transition_bandwidth: float


def windowed_fir(order: int, cutoff: float, window_kind: str = "blackman") -> TransferFunction:
    """Low-pass FIR via the window method.

    Taps are the ideal sinc impulse response for the given cutoff
    (normalized, 1.0 = Nyquist), centered on order/2 and shaped by the
    chosen window; always linear-phase by symmetry.
    """
    if order < 1:
        raise ConfigError(f"windowed design needs order >= 1, got {order}")
    if not (0.0 < cutoff < 1.0):
        raise InvalidCutoff(f"cutoff must lie in (0, 1), got {cutoff}")
    kind = str(window_kind).lower()
    if kind not in _WINDOWS:
        raise ConfigError(f"unknown window {window_kind!r}; choose from {sorted(_WINDOWS)}")
    k = np.arange(order + 1) - order / 2.0
    taps = cutoff * np.sinc(cutoff * k)
    return TransferFunction(b=taps * _WINDOWS[kind](order + 1), a=np.ones(1))


def _db_levels(tf: TransferFunction, grid: FrequencyGrid) -> np.ndarray:
    mag = evaluate_response(tf, grid)
    peak = mag.max()
    if peak <= 0.0:
        raise NoCutoffFound("response is identically zero")
    with np.errstate(divide="ignore"):
        return np.maximum(20.0 * np.log10(mag / peak), _DB_FLOOR)


def _cutoff_index(levels: np.ndarray) -> int:
    below = np.flatnonzero(levels <= _CUTOFF_DB)
    if below.size == 0:
        raise NoCutoffFound("response never drops 1 dB below its passband level")
    return int(below[0])


def _floor_index(levels: np.ndarray, start: int) -> int:
    """Index of the first local minimum at or after `start`; the last point
    serves as the floor for monotone responses."""
    inner = levels[1:-1]
    local_min = (inner <= levels[:-2]) & (inner <= levels[2:])
    candidates = np.flatnonzero(local_min) + 1
    candidates = candidates[candidates >= start]
    return int(candidates[0]) if candidates.size else levels.size - 1


def measure_metrics(tf: TransferFunction, grid: FrequencyGrid | None = None) -> FilterMetrics:
    """Ripple, attenuation, cutoff, and transition bandwidth of a filter.

    The stopband attenuation is taken against the highest level after the
    response first bottoms out past the cutoff, so later sidelobes set the
    floor; the transition band ends where the response first reaches it.
    """
    if grid is None:
        grid = FrequencyGrid.uniform(MEASUREMENT_POINTS)
    levels = _db_levels(tf, grid)
    cut = _cutoff_index(levels)
    ripple = float(np.max(np.abs(levels[:cut]))) if cut else 0.0
    floor = _floor_index(levels, cut + 1)
    attenuation = float(-np.max(levels[floor:]))
    tbw_end = int(np.flatnonzero(levels[cut:] <= -attenuation)[0]) + cut
    return FilterMetrics(
        passband_ripple_db=ripple,
        stopband_attenuation_db=attenuation,
        cutoff_freq=float(grid.omega[cut]),
        transition_bandwidth=float(grid.omega[tbw_end] - grid.omega[cut]),
    )


def transition_bandwidth_at(tf: TransferFunction, floor_db: float,
                            grid: FrequencyGrid | None = None) -> float:
    """Transition width measured down to an externally imposed attenuation
    floor (positive dB), for comparing filters on equal terms."""
    if floor_db <= 0.0:
        raise ConfigError(f"attenuation floor must be positive dB, got {floor_db}")
    if grid is None:
        grid = FrequencyGrid.uniform(MEASUREMENT_POINTS)
    levels = _db_levels(tf, grid)
    cut = _cutoff_index(levels)
    reached = np.flatnonzero(levels[cut:] <= -floor_db)
    if reached.size == 0:
        raise NoCutoffFound(f"response never reaches {floor_db} dB attenuation")
    return float(grid.omega[int(reached[0]) + cut] - grid.omega[cut])


def compare_transition(first: TransferFunction, second: TransferFunction,
                       grid: FrequencyGrid | None = None) -> tuple[float, float, float]:
    """Transition bandwidths of two filters at a common attenuation floor.

    The floor is the smaller of the two measured attenuations (the less
    attenuating filter sets the level both are judged at).  Returns
    (first_tbw, second_tbw, floor_db).
    """
    if grid is None:
        grid = FrequencyGrid.uniform(MEASUREMENT_POINTS)
    floor = min(measure_metrics(first, grid).stopband_attenuation_db,
                measure_metrics(second, grid).stopband_attenuation_db)
    if floor <= 0.0:
        # a response that climbs back to its peak past the cutoff leaves no
        # attenuation floor to compare at
        raise NoCutoffFound("no usable common attenuation floor")
    return (transition_bandwidth_at(first, floor, grid),
            transition_bandwidth_at(second, floor, grid),
            floor)
