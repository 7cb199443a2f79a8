"""Per-band mean-square cost, fitness, and the two-band fitness geometry."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import LengthMismatch
from .filters import Band


class CostPair(NamedTuple):
    j_pass: float
    j_stop: float


class FitnessPoint(NamedTuple):
    """Point in the fitness plane: stopband fitness on x, passband on y."""

    f_stop: float
    f_pass: float


def fitness(j: float) -> float:
    """Map a non-negative cost to (0, 1]: 1 at zero cost, decreasing in j."""
    return 1.0 / (1.0 + j)


def band_mse(obtained, desired, mask) -> CostPair:
    """Mean squared deviation per band; Transition points count in neither.

    When the mask has no stopband points (reference matching), j_stop is set
    equal to j_pass so the fitness-plane geometry degenerates gracefully.
    """
    obtained = np.asarray(obtained, dtype=float)
    desired = np.asarray(desired, dtype=float)
    mask = np.asarray(mask)
    if not (obtained.size == desired.size == mask.size):
        raise LengthMismatch(
            f"got lengths {obtained.size}, {desired.size}, {mask.size}")
    err2 = (desired - obtained) ** 2
    in_pass = mask == Band.PASS
    in_stop = mask == Band.STOP
    if not in_pass.any():
        raise ValueError("mask has no passband points")
    j_pass = float(err2[in_pass].mean())
    j_stop = float(err2[in_stop].mean()) if in_stop.any() else j_pass
    return CostPair(j_pass, j_stop)


def fitness_point(costs: CostPair) -> FitnessPoint:
    return FitnessPoint(f_stop=fitness(costs.j_stop), f_pass=fitness(costs.j_pass))


def fitness_norm(point: FitnessPoint) -> float:
    """Distance of a fitness point from the origin; larger means fitter."""
    return math.hypot(point.f_stop, point.f_pass)


def pooled_mse(obtained, desired, mask) -> float:
    """MSE over all scored (Pass and Stop) points pooled together."""
    obtained = np.asarray(obtained, dtype=float)
    desired = np.asarray(desired, dtype=float)
    mask = np.asarray(mask)
    if not (obtained.size == desired.size == mask.size):
        raise LengthMismatch(
            f"got lengths {obtained.size}, {desired.size}, {mask.size}")
    scored = mask != Band.TRANSITION
    return float(((desired - obtained)[scored] ** 2).mean())


def pool_costs(costs: CostPair, n_pass: int, n_stop: int) -> float:
    """Pooled MSE reassembled from per-band costs and band sizes."""
    return (n_pass * costs.j_pass + n_stop * costs.j_stop) / (n_pass + n_stop)


def scalar_report_fitness(obtained, desired, mask) -> float:
    """Single fitness figure used in reports: fitness of the pooled MSE."""
    return fitness(pooled_mse(obtained, desired, mask))
