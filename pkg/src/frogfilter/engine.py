"""Memetic frog-leaping search over filter coefficient vectors.

The population is partitioned every iteration into equal-size memeplexes by
clustering on the (passband cost, stopband cost) plane.  Within each
memeplex the worst frog repeatedly leaps toward the memeplex best, then
toward the global best, and is replaced by a fresh random frog when neither
leap improves it.  The global-best designation used as the leap target is
picked from the two highest-norm frogs by comparing the Shannon entropy of
their distance vectors to the rest of the population, and a Gaussian
mutation of memeplex leaders fires after a window of stagnation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import objective
from .errors import ConfigError
from .filters import (
    Band,
    DesignTarget,
    FrequencyGrid,
    TransferFunction,
    schur_cohn_stable,
    target_response,
)
from .objective import CostPair, FitnessPoint

# pole-radius contraction factor used to force stability
_CONTRACTION = 0.95
# uniform redraws before falling back to contraction when sampling IIR frogs
_MAX_RESAMPLE = 50
# a best-norm gain below this does not count as progress (stagnation tracking)
_IMPROVEMENT_EPS = 1e-12
_ENTROPY_TIE_EPS = 1e-12
_KMEANS_ROUNDS = 10


@dataclass
class EngineParams:
    """Search parameters; defaults follow the tuned desk-scale setup."""

    max_iterations: int = 500
    leaps_per_memeplex: int = 8
    num_memeplexes: int = 5
    population: int = 40
    c_max: float = 2.0
    c_min: float = 0.1
    coeff_bound: float = 2.0
    stagnation_window: int = 50
    mutation_sigma: float = 0.01
    rng_seed: int = 0
    per_coordinate_rand: bool = True

    def validate(self) -> None:
        if self.population < 1 or self.num_memeplexes < 1:
            raise ConfigError("population and num_memeplexes must be positive")
        if self.population % self.num_memeplexes != 0:
            raise ConfigError(
                f"population {self.population} is not divisible by "
                f"num_memeplexes {self.num_memeplexes}")
        if not (self.c_max >= self.c_min > 0.0):
            raise ConfigError(f"need c_max >= c_min > 0, got {self.c_max}, {self.c_min}")
        if self.max_iterations < 1 or self.leaps_per_memeplex < 1:
            raise ConfigError("max_iterations and leaps_per_memeplex must be positive")
        if self.coeff_bound <= 0.0:
            raise ConfigError("coeff_bound must be positive")
        if self.stagnation_window < 1:
            raise ConfigError("stagnation_window must be positive")
        if self.mutation_sigma < 0.0:
            raise ConfigError("mutation_sigma must be non-negative")
        if not (0 <= int(self.rng_seed) < 2 ** 64):
            raise ConfigError("rng_seed must fit in 64 unsigned bits")


@dataclass
class Frog:
    """One candidate solution with cached objective values."""

    position: np.ndarray
    costs: CostPair
    fit: FitnessPoint
    norm: float

    def copy(self) -> "Frog":
        return replace(self, position=self.position.copy())


@dataclass
class Memeplex:
    members: list[int]
    capacity: int


@dataclass(frozen=True)
class IterationRecord:
    best_norm: float
    best_fitness: float
    mean_norm: float


@dataclass
class RunResult:
    best: Frog
    history: list[IterationRecord]
    evaluations: int
    seed: int
    rng: str


@dataclass
class DesignProblem:
    """Coefficient layout plus the evaluation grid and desired response.

    FIR positions are [b_0..b_m]; IIR positions are [a_1..a_n, b_0..b_m]
    with a_0 fixed to 1.
    """

    kind: str
    numerator_order: int
    target: DesignTarget
    grid: FrequencyGrid = field(default_factory=lambda: FrequencyGrid.uniform(128))
    denominator_order: int = 0

    def __post_init__(self):
        self.kind = str(self.kind).lower()
        if self.kind not in ("fir", "iir"):
            raise ConfigError(f"kind must be 'fir' or 'iir', got {self.kind!r}")
        if self.numerator_order < 1:
            raise ConfigError("numerator_order must be >= 1")
        if self.kind == "fir" and self.denominator_order != 0:
            raise ConfigError("FIR problems take no denominator order")
        if self.kind == "iir" and self.denominator_order < 1:
            raise ConfigError("IIR problems need denominator_order >= 1")
        desired, mask = target_response(self.target, self.grid)
        self._desired = desired
        self._mask = mask
        self._pass_idx = np.flatnonzero(mask == Band.PASS)
        self._stop_idx = np.flatnonzero(mask == Band.STOP)
        self.n_pass = int(self._pass_idx.size)
        self.n_stop = int(self._stop_idx.size)
        self.n_transition = int(self.grid.count - self.n_pass - self.n_stop)
        z_inv = np.exp(-1j * np.pi * self.grid.omega)
        self._exp_num = z_inv[:, None] ** np.arange(self.numerator_order + 1)
        if self.kind == "iir":
            self._exp_den = z_inv[:, None] ** np.arange(self.denominator_order + 1)
            self._contract = _CONTRACTION ** np.arange(1, self.denominator_order + 1)

    @property
    def dim(self) -> int:
        n_den = self.denominator_order if self.kind == "iir" else 0
        return n_den + self.numerator_order + 1

    @property
    def desired(self) -> np.ndarray:
        return self._desired

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    def split(self, position: np.ndarray):
        """(b, full denominator with leading 1) for a position vector."""
        if self.kind == "fir":
            return position, np.ones(1)
        n = self.denominator_order
        return position[n:], np.concatenate(([1.0], position[:n]))

    def decode(self, position: np.ndarray) -> TransferFunction:
        b, a = self.split(position)
        return TransferFunction(b=b.copy(), a=a)

    def position_is_stable(self, position: np.ndarray) -> bool:
        if self.kind == "fir":
            return True
        n = self.denominator_order
        return schur_cohn_stable([1.0, *position[:n]])

    def response(self, position: np.ndarray) -> np.ndarray:
        if self.kind == "fir":
            return np.abs(self._exp_num @ position)
        n = self.denominator_order
        num = self._exp_num @ position[n:]
        den = self._exp_den[:, 0] + self._exp_den[:, 1:] @ position[:n]
        return np.abs(num) / np.abs(den)

    def make_frog(self, position: np.ndarray) -> Frog | None:
        """Evaluate a position; None when the costs come out non-finite
        (pole hugging the unit circle can overflow the squared error)."""
        diff = self._desired - self.response(position)
        j_pass = float(np.mean(diff[self._pass_idx] ** 2))
        j_stop = float(np.mean(diff[self._stop_idx] ** 2)) if self.n_stop else j_pass
        if not (math.isfinite(j_pass) and math.isfinite(j_stop)):
            return None
        costs = CostPair(j_pass, j_stop)
        fit = objective.fitness_point(costs)
        return Frog(position=position, costs=costs, fit=fit,
                    norm=objective.fitness_norm(fit))

    def scalar_fitness(self, costs: CostPair) -> float:
        """Pooled-MSE report fitness reassembled from cached band costs."""
        return objective.fitness(objective.pool_costs(costs, self.n_pass, self.n_stop))


def stabilize(position: np.ndarray, problem: DesignProblem) -> np.ndarray:
    """Contract denominator coefficients (a_k *= rho^k) until stable.

    Each application scales every pole radius by rho, so termination is
    guaranteed; FIR positions are returned unchanged.
    """
    if problem.kind == "fir" or problem.position_is_stable(position):
        return position
    n = problem.denominator_order
    out = position.copy()
    for _ in range(10_000):
        out[:n] *= problem._contract
        if problem.position_is_stable(out):
            return out
    raise RuntimeError("pole contraction failed to stabilize the denominator")


def _fresh_frog(problem: DesignProblem, params: EngineParams, rng) -> tuple[Frog, int]:
    """Random frog inside the coefficient box; IIR draws are resampled for
    stability with pole contraction as the fallback.  Each draw is a uniform
    box sample shrunk by a per-frog amplitude factor so the population spans
    magnitudes from near-zero to the full bound — full-amplitude sampling
    alone starts every frog with a wildly oversized response and the search
    then fixates on one band.  Returns (frog, objective evaluations spent)."""
    evals = 0
    position = None
    for _ in range(_MAX_RESAMPLE):
        amplitude = params.coeff_bound * rng.random()
        cand = rng.uniform(-amplitude, amplitude, problem.dim)
        if problem.position_is_stable(cand):
            position = cand
            break
    if position is None:
        position = stabilize(cand, problem)
    frog = problem.make_frog(position)
    evals += 1
    while frog is None:  # overflowing response despite stability; contract more
        n = problem.denominator_order
        position = position.copy()
        position[:n] *= problem._contract
        frog = problem.make_frog(position)
        evals += 1
    return frog, evals


def init_population(params: EngineParams, problem: DesignProblem,
                    rng=None) -> tuple[list[Frog], int]:
    """Seeded random population with all caches filled; deterministic for a
    given rng_seed.  Returns (frogs, objective evaluations)."""
    if rng is None:
        rng = np.random.default_rng(params.rng_seed)
    frogs = []
    evals = 0
    for _ in range(params.population):
        frog, used = _fresh_frog(problem, params, rng)
        frogs.append(frog)
        evals += used
    return frogs, evals


def c_schedule(iteration: int, params: EngineParams) -> float:
    """Leap scale factor, linear from c_max (first iteration) to c_min (last)."""
    if params.max_iterations == 1:
        return params.c_max
    frac = iteration / (params.max_iterations - 1)
    return params.c_max - (params.c_max - params.c_min) * frac


def leap(worst: Frog, leader: Frog, c: float, params: EngineParams, rng) -> np.ndarray:
    """Candidate position one random step from the worst frog toward a leader.

    One scalar uniform draw scales the whole step unless per-coordinate
    randomization is enabled; the result is clamped to the coefficient box.
    """
    if params.per_coordinate_rand:
        u = rng.random(worst.position.size)
    else:
        u = rng.random()
    cand = worst.position + c * u * (leader.position - worst.position)
    return np.clip(cand, -params.coeff_bound, params.coeff_bound)


def cluster_memeplexes(population: list[Frog], num_memeplexes: int) -> list[Memeplex]:
    """Partition the population into equal-size groups on the cost plane.

    Centroids start at norm-quantile frogs, are refined by a few k-means
    rounds, and frogs are then assigned greedily in order of distance with
    each memeplex capped at its share of the population.
    """
    n = len(population)
    m = num_memeplexes
    if n % m != 0:
        raise ConfigError(f"population {n} is not divisible into {m} memeplexes")
    capacity = n // m
    coords = np.array([[f.costs.j_pass, f.costs.j_stop] for f in population])

    by_norm = sorted(range(n), key=lambda i: (population[i].norm, i))
    seed_ranks = [min(n - 1, int((q + 0.5) * n / m)) for q in range(m)]
    centroids = coords[[by_norm[r] for r in seed_ranks]].astype(float)
    for _ in range(_KMEANS_ROUNDS):
        d2 = ((coords[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        for c in range(m):
            chosen = coords[assign == c]
            if chosen.size:  # empty clusters keep their previous centroid
                centroids[c] = chosen.mean(axis=0)

    dist = np.sqrt(((coords[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2))
    frog_ids = np.repeat(np.arange(n), m)
    cent_ids = np.tile(np.arange(m), n)
    order = np.lexsort((cent_ids, frog_ids, dist.ravel()))
    members: list[list[int]] = [[] for _ in range(m)]
    assigned = np.zeros(n, dtype=bool)
    for k in order:
        f, c = int(frog_ids[k]), int(cent_ids[k])
        if assigned[f] or len(members[c]) >= capacity:
            continue
        members[c].append(f)
        assigned[f] = True
    return [Memeplex(members=sorted(ms), capacity=capacity) for ms in members]


def shannon_entropy(distances) -> float:
    """Entropy in bits of the distance vector normalized to a distribution;
    zero-total vectors return 0 and 0*log0 counts as 0."""
    d = np.asarray(distances, dtype=float)
    total = d.sum()
    if total <= 0.0:
        return 0.0
    p = d / total
    p = p[p > 0.0]
    return float(-(p * np.log2(p)).sum())


def diversity_select_best(population: list[Frog]) -> int:
    """Pick the leap leader from the two highest-norm frogs.

    The frog whose position-space distance vector to the rest of the
    population has the lower entropy wins; near-equal entropies fall back to
    higher norm, then lower index.
    """
    n = len(population)
    if n == 1:
        return 0
    top = sorted(range(n), key=lambda i: (-population[i].norm, i))[:2]
    positions = np.array([f.position for f in population])
    entropies = []
    for i in top:
        dist = np.linalg.norm(positions - positions[i], axis=1)
        entropies.append(shannon_entropy(np.delete(dist, i)))
    if abs(entropies[0] - entropies[1]) < _ENTROPY_TIE_EPS:
        return top[0]
    return top[0] if entropies[0] < entropies[1] else top[1]


def _memeplex_best(memeplex: Memeplex, population: list[Frog]) -> int:
    return min(memeplex.members, key=lambda i: (-population[i].norm, i))


def _memeplex_worst(candidates, population: list[Frog]) -> int:
    # smallest norm; ties prefer worse passband, then lower index
    return min(candidates, key=lambda i: (population[i].norm, -population[i].costs.j_pass, i))


@dataclass
class EvolveStats:
    evaluations: int = 0
    accepted_local: int = 0
    accepted_global: int = 0
    replacements: int = 0
    skipped: int = 0


def evolve_memeplex(memeplex: Memeplex, population: list[Frog],
                    problem: DesignProblem, params: EngineParams,
                    global_best: int, protected: frozenset[int],
                    c: float, rng) -> EvolveStats:
    """Run the leap rounds for one memeplex, mutating the population in place.

    Each round the worst eligible frog tries a leap toward the memeplex
    best, then toward the global best; a candidate is accepted only if it is
    stable and strictly raises the frog's norm, and a fresh random frog
    replaces the leaper when both attempts fail.  Frogs in `protected` (the
    incumbent best and the designated leader) never leap, which keeps the
    best-so-far monotone even in degenerate memeplexes.
    """
    stats = EvolveStats()
    for _ in range(params.leaps_per_memeplex):
        eligible = [i for i in memeplex.members if i not in protected]
        if not eligible:
            stats.skipped += 1
            continue
        worst = _memeplex_worst(eligible, population)
        leaper = population[worst]
        accepted = False
        for leader, label in ((_memeplex_best(memeplex, population), "accepted_local"),
                              (global_best, "accepted_global")):
            cand_pos = leap(leaper, population[leader], c, params, rng)
            if not problem.position_is_stable(cand_pos):
                continue
            cand = problem.make_frog(cand_pos)
            stats.evaluations += 1
            if cand is not None and cand.norm > leaper.norm:
                population[worst] = cand
                setattr(stats, label, getattr(stats, label) + 1)
                accepted = True
                break
        if not accepted:
            frog, used = _fresh_frog(problem, params, rng)
            stats.evaluations += used
            population[worst] = frog
            stats.replacements += 1
    return stats


@dataclass
class StagnationState:
    counter: int = 0
    best_norm: float = -math.inf

    def observe(self, current_best: float) -> None:
        if current_best > self.best_norm + _IMPROVEMENT_EPS:
            self.best_norm = current_best
            self.counter = 0
        else:
            self.counter += 1


def stagnation_mutation(population: list[Frog], memeplexes: list[Memeplex],
                        state: StagnationState, problem: DesignProblem,
                        params: EngineParams, protected: frozenset[int],
                        rng) -> int:
    """Gaussian-perturb each memeplex leader (never the protected frogs)
    once the best norm has stalled for a full window; resets the counter.
    Returns objective evaluations spent."""
    if state.counter < params.stagnation_window:
        return 0
    evals = 0
    for memeplex in memeplexes:
        leader = _memeplex_best(memeplex, population)
        if leader in protected:
            continue
        frog = population[leader]
        noise = rng.normal(0.0, params.mutation_sigma, frog.position.size)
        position = np.clip(frog.position + noise, -params.coeff_bound, params.coeff_bound)
        position = stabilize(position, problem)
        mutated = problem.make_frog(position)
        evals += 1
        while mutated is None:
            n = problem.denominator_order
            position = position.copy()
            position[:n] *= problem._contract
            mutated = problem.make_frog(position)
            evals += 1
        population[leader] = mutated
    state.counter = 0
    return evals


def _incumbent(population: list[Frog]) -> int:
    return min(range(len(population)), key=lambda i: (-population[i].norm, i))


def rng_description() -> str:
    return f"numpy.random.Generator(PCG64) numpy=={np.__version__}"


def run(problem: DesignProblem, params: EngineParams) -> RunResult:
    """Full optimization loop; deterministic for a given (problem, params).

    Per iteration: re-cluster, evolve every memeplex with the scheduled leap
    scale, refresh the global-best designation by the entropy rule, then
    apply the stagnation mutation.  The recorded best norm never decreases
    because the incumbent is protected; the best-fitness column is the best
    pooled-MSE fitness achieved so far.
    """
    params.validate()
    rng = np.random.default_rng(params.rng_seed)
    population, evaluations = init_population(params, problem, rng)

    designated = diversity_select_best(population)
    state = StagnationState()
    history: list[IterationRecord] = []
    best_fitness = max(problem.scalar_fitness(f.costs) for f in population)

    for t in range(params.max_iterations):
        c = c_schedule(t, params)
        memeplexes = cluster_memeplexes(population, params.num_memeplexes)
        protected = frozenset((designated, _incumbent(population)))
        for memeplex in memeplexes:
            stats = evolve_memeplex(memeplex, population, problem, params,
                                    designated, protected, c, rng)
            evaluations += stats.evaluations

        designated = diversity_select_best(population)
        best_idx = _incumbent(population)
        state.observe(population[best_idx].norm)
        protected = frozenset((designated, best_idx))
        evaluations += stagnation_mutation(population, memeplexes, state,
                                           problem, params, protected, rng)

        norms = [f.norm for f in population]
        best_idx = _incumbent(population)
        best_fitness = max(best_fitness,
                           max(problem.scalar_fitness(f.costs) for f in population))
        history.append(IterationRecord(best_norm=norms[best_idx],
                                       best_fitness=best_fitness,
                                       mean_norm=float(np.mean(norms))))

    best = population[_incumbent(population)].copy()
    return RunResult(best=best, history=history, evaluations=evaluations,
                     seed=int(params.rng_seed), rng=rng_description())
