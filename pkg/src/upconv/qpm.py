"""First-order quasi-phase matching for sum-frequency generation.

Wavelengths in um, grating length in m, phase mismatch in rad/m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect, brentq

from .dispersion import DEFAULT_MODEL, SellmeierModel, refractive_index
from .errors import DomainError, NoPhaseMatchError, ValidationError

# sinc^2(x) = 1/2 at x = SINC2_HALF_X
SINC2_HALF_X = 1.3915573782515103
FWHM_TOL_NM = 1e-4


@dataclass(frozen=True)
class QpmGrating:
    length: float = 0.052
    period: float = 19.6
    temperature: float = 60.0

    def __post_init__(self):
        if not self.length > 0:
            raise ValidationError(f"grating length must be > 0 m, got {self.length}")
        if not self.period > 0:
            raise ValidationError(f"poling period must be > 0 um, got {self.period}")


def sfg_wavelength(signal: float, pump: float) -> float:
    """Sum-frequency wavelength from energy conservation."""
    if not (signal > 0 and pump > 0):
        raise DomainError(f"wavelengths must be positive, got signal={signal}, pump={pump}")
    return signal * pump / (signal + pump)


@dataclass(frozen=True)
class SfgTriple:
    signal_wavelength: float
    pump_wavelength: float
    sfg_wavelength: float

    def __post_init__(self):
        s, p, q = self.signal_wavelength, self.pump_wavelength, self.sfg_wavelength
        if min(s, p, q) <= 0:
            raise ValidationError("all wavelengths must be positive")
        if abs((1 / q) - (1 / s + 1 / p)) > 1e-12 * (1 / q):
            raise ValidationError(f"energy not conserved: 1/{q} != 1/{s} + 1/{p}")
        if q >= min(s, p):
            raise ValidationError("sfg wavelength must be shorter than both inputs")

    @classmethod
    def from_inputs(cls, signal: float, pump: float) -> SfgTriple:
        return cls(signal, pump, sfg_wavelength(signal, pump))


def _wavevector_sum(triple: SfgTriple, temperature: float, dispersion: SellmeierModel) -> float:
    """n3/l3 - n1/l1 - n2/l2 in 1/um."""
    l1, l2, l3 = triple.signal_wavelength, triple.pump_wavelength, triple.sfg_wavelength
    n1, n2, n3 = refractive_index(dispersion, np.array([l1, l2, l3]), temperature)
    return n3 / l3 - n1 / l1 - n2 / l2


def phase_mismatch(grating: QpmGrating, triple: SfgTriple,
                   dispersion: SellmeierModel = DEFAULT_MODEL) -> float:
    """Delta k = k3 - k1 - k2 - 2 pi / period, in rad/m."""
    s = _wavevector_sum(triple, grating.temperature, dispersion)
    return 2 * math.pi * (s - 1.0 / grating.period) * 1e6


def solve_qpm_period(triple: SfgTriple, temperature: float,
                     dispersion: SellmeierModel = DEFAULT_MODEL) -> float:
    """Poling period (um) that zeroes the first-order phase mismatch."""
    l1, l2, l3 = triple.signal_wavelength, triple.pump_wavelength, triple.sfg_wavelength
    s = _wavevector_sum(triple, temperature, dispersion)
    scale = 1 / l1 + 1 / l2 + 1 / l3
    if s <= 1e-12 * scale:
        raise NoPhaseMatchError(
            f"no first-order QPM period: wavevector mismatch {s:.3e} 1/um is not positive"
        )
    return 1.0 / s


def _mismatch_vs_signal(grating: QpmGrating, pump: float, signal, dispersion: SellmeierModel):
    lam1 = np.asarray(signal, dtype=float)
    lam3 = lam1 * pump / (lam1 + pump)
    T = grating.temperature
    n1 = refractive_index(dispersion, lam1, T)
    n2 = refractive_index(dispersion, pump, T)
    n3 = refractive_index(dispersion, lam3, T)
    return 2 * math.pi * (n3 / lam3 - n1 / lam1 - n2 / pump - 1.0 / grating.period) * 1e6


def tuning_curve(grating: QpmGrating, pump: float, signal_grid,
                 dispersion: SellmeierModel = DEFAULT_MODEL):
    """Undepleted sinc^2 response over a signal-wavelength grid.

    Returns ``(signal_grid, response)`` as numpy arrays, response in [0, 1].
    """
    grid = np.asarray(signal_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("signal grid must be a non-empty 1-D sequence")
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("signal grid must be strictly increasing")
    dk = _mismatch_vs_signal(grating, pump, grid, dispersion)
    return grid, sinc2(dk * grating.length / 2)


def sinc2(x):
    """(sin x / x)^2 with the removable singularity filled in."""
    return np.sinc(np.asarray(x, dtype=float) / np.pi) ** 2


def _signal_limits(pump: float, dispersion: SellmeierModel) -> tuple[float, float]:
    lo, hi = dispersion.validity_range
    # the sfg wavelength must also stay inside the range
    if pump > lo:
        lo = max(lo, lo * pump / (pump - lo))
    return lo, hi


def phase_matched_signal(grating: QpmGrating, pump: float,
                         dispersion: SellmeierModel = DEFAULT_MODEL,
                         guess: float | None = None, samples: int = 4001) -> float:
    """Signal wavelength (um) at which Delta k = 0 for a fixed pump.

    Roots are bracketed on a uniform scan of the usable range; with several
    roots the one nearest ``guess`` (or the shortest, without a guess) wins.
    """
    lo, hi = _signal_limits(pump, dispersion)
    if lo >= hi:
        raise NoPhaseMatchError(f"pump {pump} um leaves no usable signal range")
    grid = np.linspace(lo, hi, samples)
    dk = _mismatch_vs_signal(grating, pump, grid, dispersion)
    idx = np.nonzero(np.sign(dk[:-1]) * np.sign(dk[1:]) <= 0)[0]
    if idx.size == 0:
        raise NoPhaseMatchError(
            f"no phase-matched signal in [{lo:.4g}, {hi:.4g}] um for period {grating.period} um"
        )
    f = lambda x: float(_mismatch_vs_signal(grating, pump, x, dispersion))  # noqa: E731
    roots = [brentq(f, grid[i], grid[i + 1], xtol=1e-13, rtol=1e-15) for i in idx]
    if guess is None:
        return roots[0]
    return min(roots, key=lambda r: abs(r - guess))


def mismatch_slope(grating: QpmGrating, pump: float, signal: float,
                   dispersion: SellmeierModel = DEFAULT_MODEL, step: float = 1e-5) -> float:
    """d(Delta k)/d(signal wavelength) in rad/m per um, by central difference."""
    a = _mismatch_vs_signal(grating, pump, signal + step, dispersion)
    b = _mismatch_vs_signal(grating, pump, signal - step, dispersion)
    return float(a - b) / (2 * step)


def pm_bandwidth_linearized(grating: QpmGrating, pump: float,
                            dispersion: SellmeierModel = DEFAULT_MODEL,
                            guess: float | None = None) -> float:
    """FWHM (nm) assuming Delta k is linear in signal wavelength across the peak."""
    lam0 = phase_matched_signal(grating, pump, dispersion, guess)
    slope = abs(mismatch_slope(grating, pump, lam0, dispersion))
    return 2 * SINC2_HALF_X * 2 / (grating.length * slope) * 1e3


def pm_bandwidth_fwhm(grating: QpmGrating, pump: float,
                      dispersion: SellmeierModel = DEFAULT_MODEL,
                      guess: float | None = None) -> float:
    """Full width at half maximum (nm) of the sinc^2 tuning curve in signal wavelength.

    Each half-maximum crossing is found by bisection to ``FWHM_TOL_NM``.
    """
    lam0 = phase_matched_signal(grating, pump, dispersion, guess)
    lo, hi = _signal_limits(pump, dispersion)

    def excess(x):
        return float(sinc2(_mismatch_vs_signal(grating, pump, x, dispersion) * grating.length / 2)) - 0.5

    est = pm_bandwidth_linearized(grating, pump, dispersion, lam0) * 1e-3 / 2
    edges = []
    for sign in (-1.0, 1.0):
        step = 0.5 * est
        x = lam0 + sign * step
        while excess(x) > 0:
            step *= 1.5
            x = lam0 + sign * step
            if not lo < x < hi:
                raise NoPhaseMatchError("half-maximum point lies outside the dispersion range")
        edges.append(bisect(excess, min(lam0, x), max(lam0, x), xtol=FWHM_TOL_NM * 1e-3 / 2))
    return (edges[1] - edges[0]) * 1e3
