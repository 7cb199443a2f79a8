"""Transfer functions, magnitude responses, stability, and design targets.

Frequencies are normalized so that 1.0 is the Nyquist frequency: a grid
value w corresponds to the physical angular frequency w*pi rad/sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np
from numpy.polynomial import polynomial as npp

from .errors import EmptyBand, NonFiniteResponse

# reflection coefficients this close to the unit circle count as unstable
STABILITY_MARGIN = 1e-12


class Band(IntEnum):
    PASS = 0
    STOP = 1
    TRANSITION = 2


BAND_NAMES = {Band.PASS: "pass", Band.STOP: "stop", Band.TRANSITION: "transition"}


@dataclass(frozen=True)
class TransferFunction:
    """Rational transfer function in powers of z^-1.

    b holds the numerator coefficients b_0..b_m, a the denominator
    coefficients a_0..a_n with a_0 fixed to 1.  FIR filters use a == [1].
    """

    b: np.ndarray
    a: np.ndarray = field(default_factory=lambda: np.ones(1))

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        if b.size == 0:
            raise ValueError("numerator must have at least one coefficient")
        if a.size == 0:
            raise ValueError("denominator must have at least one coefficient")
        if a[0] != 1.0:
            raise ValueError(f"denominator must be monic in z^0 (a[0] == 1), got {a[0]!r}")
        if not (np.isfinite(b).all() and np.isfinite(a).all()):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)

    @property
    def is_fir(self) -> bool:
        return self.a.size == 1


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing grid of normalized frequencies spanning [0, 1]."""

    omega: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        if omega.ndim != 1 or omega.size < 2:
            raise ValueError("grid needs at least two points")
        if omega[0] != 0.0 or omega[-1] != 1.0:
            raise ValueError("grid must span [0, 1] inclusive")
        if not (np.diff(omega) > 0).all():
            raise ValueError("grid frequencies must be strictly increasing")
        object.__setattr__(self, "omega", omega)

    @classmethod
    def uniform(cls, count: int) -> "FrequencyGrid":
        return cls(np.linspace(0.0, 1.0, int(count)))

    @property
    def count(self) -> int:
        return self.omega.size


def schur_cohn_stable(a) -> bool:
    """Schur-Cohn step-down test on a monic denominator a (a[0] == 1).

    Stable iff every reflection coefficient produced by the recursion has
    magnitude below 1; a small margin rejects poles numerically on the
    unit circle.  O(n^2), no root finding.
    """
    coeffs = [float(x) for x in a]
    for deg in range(len(coeffs) - 1, 0, -1):
        k = coeffs[deg]
        if abs(k) >= 1.0 - STABILITY_MARGIN:
            return False
        denom = 1.0 - k * k
        coeffs = [(coeffs[i] - k * coeffs[deg - i]) / denom for i in range(deg)]
    return True


def is_stable(tf: TransferFunction) -> bool:
    """True iff every pole lies strictly inside the unit circle (FIR: always)."""
    return schur_cohn_stable(tf.a)


def evaluate_response(tf: TransferFunction, grid: FrequencyGrid) -> np.ndarray:
    """Magnitude of H(e^{j*pi*omega}) at each grid point (linear scale)."""
    z_inv = np.exp(-1j * np.pi * grid.omega)
    num = npp.polyval(z_inv, tf.b)
    den = npp.polyval(z_inv, tf.a)
    with np.errstate(divide="ignore", invalid="ignore"):
        mag = np.abs(num) / np.abs(den)
    if not np.isfinite(mag).all():
        raise NonFiniteResponse("denominator vanishes on the unit circle at a grid point")
    return mag


_IDEAL_KINDS = ("lowpass", "highpass", "bandpass", "bandstop")


@dataclass(frozen=True)
class DesignTarget:
    """Desired magnitude response: an ideal brick-wall band layout, or the
    response of a reference filter to match."""

    mode: str
    band_kind: str | None = None
    edges: tuple[tuple[float, float], ...] = ()
    reference: TransferFunction | None = None

    @classmethod
    def ideal(cls, band_kind: str, edges) -> "DesignTarget":
        """Brick-wall target. edges is one (pass, stop) pair for lowpass and
        highpass, two pairs (lower, upper) for bandpass and bandstop."""
        kind = str(band_kind).lower()
        if kind not in _IDEAL_KINDS:
            raise ValueError(f"band_kind must be one of {_IDEAL_KINDS}, got {band_kind!r}")
        pairs = tuple((float(p), float(s)) for p, s in edges)
        expected = 1 if kind in ("lowpass", "highpass") else 2
        if len(pairs) != expected:
            raise ValueError(f"{kind} needs {expected} edge pair(s), got {len(pairs)}")
        for p, s in pairs:
            if not (0.0 < p < 1.0 and 0.0 < s < 1.0):
                raise ValueError(f"band edges must lie in (0, 1), got ({p}, {s})")
        _check_edge_order(kind, pairs)
        return cls(mode="ideal", band_kind=kind, edges=pairs)

    @classmethod
    def low_pass(cls, pass_edge: float, stop_edge: float | None = None) -> "DesignTarget":
        """Low-pass target; with one argument the transition has zero width."""
        return cls.ideal("lowpass", [(pass_edge, pass_edge if stop_edge is None else stop_edge)])

    @classmethod
    def from_reference(cls, tf: TransferFunction) -> "DesignTarget":
        if not is_stable(tf):
            raise ValueError("reference filter must be stable")
        return cls(mode="reference", reference=tf)


def _check_edge_order(kind: str, pairs) -> None:
    if kind == "lowpass":
        (p, s), = pairs
        ok = p <= s
    elif kind == "highpass":
        (p, s), = pairs
        ok = s <= p
    elif kind == "bandpass":
        (p1, s1), (p2, s2) = pairs
        ok = s1 <= p1 <= p2 <= s2
    else:  # bandstop
        (p1, s1), (p2, s2) = pairs
        ok = p1 <= s1 <= s2 <= p2
    if not ok:
        raise ValueError(f"edge pairs {pairs} are not ordered consistently for {kind}")


def _band_regions(target: DesignTarget, omega: np.ndarray):
    kind = target.band_kind
    if kind == "lowpass":
        (p, s), = target.edges
        return [("stopband", omega >= s, Band.STOP),
                ("passband", omega <= p, Band.PASS)]
    if kind == "highpass":
        (p, s), = target.edges
        return [("stopband", omega <= s, Band.STOP),
                ("passband", omega >= p, Band.PASS)]
    if kind == "bandpass":
        (p1, s1), (p2, s2) = target.edges
        return [("lower stopband", omega <= s1, Band.STOP),
                ("upper stopband", omega >= s2, Band.STOP),
                ("passband", (omega >= p1) & (omega <= p2), Band.PASS)]
    (p1, s1), (p2, s2) = target.edges
    return [("stopband", (omega >= s1) & (omega <= s2), Band.STOP),
            ("lower passband", omega <= p1, Band.PASS),
            ("upper passband", omega >= p2, Band.PASS)]


def ideal_response(target: DesignTarget, grid: FrequencyGrid):
    """Brick-wall desired magnitudes plus the pass/stop/transition mask.

    A grid point exactly on a passband edge is Pass, exactly on a stopband
    edge Stop (pass wins when the transition has zero width); points strictly
    between paired edges are Transition and carry magnitude 0.
    """
    if target.mode != "ideal":
        raise ValueError("ideal_response requires an ideal-mode target")
    regions = _band_regions(target, grid.omega)
    mask = np.full(grid.count, Band.TRANSITION, dtype=np.int8)
    for _, cond, label in regions:  # later regions win ties; passbands come last
        mask[cond] = label
    for name, cond, label in regions:
        if not (cond & (mask == label)).any():
            raise EmptyBand(f"no grid points fall in the {name}")
    values = (mask == Band.PASS).astype(float)
    return values, mask


def reference_response(target: DesignTarget, grid: FrequencyGrid) -> np.ndarray:
    """Magnitude response of the reference filter on the grid."""
    if target.mode != "reference":
        raise ValueError("reference_response requires a reference-mode target")
    return evaluate_response(target.reference, grid)


def target_response(target: DesignTarget, grid: FrequencyGrid):
    """Desired magnitudes and band mask for either target mode.

    Reference mode labels every grid point Pass (single-objective match).
    """
    if target.mode == "ideal":
        return ideal_response(target, grid)
    values = reference_response(target, grid)
    return values, np.full(grid.count, Band.PASS, dtype=np.int8)
