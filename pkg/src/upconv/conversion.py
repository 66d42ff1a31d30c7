"""Pump-power dependence of the internal conversion efficiency.

The waveguide converts a fraction ``eta_max * sin^2(pi/2 * sqrt(P / p_peak))``
of the signal; past ``p_peak`` the light back-converts. Depletion of the
transmitted signal is the complement of that fraction, in dB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError, FitError, ValidationError

COMPLETE_DEPLETION = -math.inf
"""Returned by :func:`signal_depletion_db` when every signal photon converts."""


@dataclass(frozen=True)
class ConversionModel:
    eta_max: float = 1 - 10 ** (-2.35)
    p_peak: float = 0.300
    length: float = 0.052

    def __post_init__(self):
        if not 0 < self.eta_max <= 1:
            raise ValidationError(f"eta_max must lie in (0, 1], got {self.eta_max}")
        if not self.p_peak > 0:
            raise ValidationError(f"p_peak must be > 0 W, got {self.p_peak}")
        if not self.length > 0:
            raise ValidationError(f"length must be > 0 m, got {self.length}")

    @property
    def normalized_efficiency(self) -> float:
        """pi^2 / (4 p_peak L^2), in 1/(W m^2)."""
        return math.pi ** 2 / (4 * self.p_peak * self.length ** 2)

    @classmethod
    def from_normalized_efficiency(cls, eta_nor: float, length: float, eta_max: float = 1.0) -> ConversionModel:
        if not eta_nor > 0:
            raise ValidationError(f"normalized efficiency must be > 0, got {eta_nor}")
        return cls(eta_max=eta_max, p_peak=math.pi ** 2 / (4 * eta_nor * length ** 2), length=length)


@dataclass(frozen=True)
class PowerCountSample:
    pump_power: float
    value: float
    kind: str = "efficiency"

    def __post_init__(self):
        if self.kind not in ("efficiency", "noise"):
            raise ValidationError(f"kind must be 'efficiency' or 'noise', got {self.kind!r}")
        if not self.pump_power >= 0:
            raise ValidationError(f"pump_power must be >= 0, got {self.pump_power}")
        if not self.value >= 0:
            raise ValidationError(f"value must be >= 0, got {self.value}")


def _sin2_law(amplitude, p_peak, power):
    return amplitude * np.sin(0.5 * np.pi * np.sqrt(power / p_peak)) ** 2


def internal_efficiency(model: ConversionModel, pump_power):
    """Fraction of signal photons converted at ``pump_power`` (W). Vectorized."""
    p = np.asarray(pump_power, dtype=float)
    if np.any(p < 0) or np.any(np.isnan(p)):
        raise DomainError(f"pump_power must be >= 0 W, got {pump_power}")
    eta = _sin2_law(model.eta_max, model.p_peak, p)
    return float(eta) if eta.ndim == 0 else eta


def signal_depletion_db(model: ConversionModel, pump_power: float) -> float:
    """Transmitted signal with pump on relative to pump off, 10 log10(1 - eta)."""
    remaining = 1.0 - internal_efficiency(model, pump_power)
    if remaining <= 0.0:
        return COMPLETE_DEPLETION
    return 10.0 * math.log10(remaining)


def conversion_from_depletion(depletion_db: float) -> float:
    if depletion_db > 0 or math.isnan(depletion_db):
        raise DomainError(f"depletion must be <= 0 dB, got {depletion_db}")
    return 1.0 - 10.0 ** (depletion_db / 10.0)


@dataclass(frozen=True)
class SineSquaredFit:
    amplitude: float
    p_peak: float
    rms_residual: float
    start: float
    iterations: int


def fit_sine_squared(samples: Iterable[PowerCountSample],
                     starts: Sequence[float] | None = None,
                     max_iter: int = 10_000) -> SineSquaredFit:
    """Least-squares fit of ``A sin^2(pi/2 sqrt(P/p_peak))`` to efficiency samples.

    Each start value of ``p_peak`` runs a Levenberg-Marquardt solve; the
    amplitude start is the largest observed value. The lowest-residual
    converged start is returned.
    """
    samples = [s for s in samples]
    if any(s.kind != "efficiency" for s in samples):
        raise FitError("sine-squared fit takes efficiency samples only")
    p = np.array([s.pump_power for s in samples], dtype=float)
    y = np.array([s.value for s in samples], dtype=float)
    if len(samples) < 3 or np.unique(p[p > 0]).size < 2:
        raise FitError(
            f"need >= 3 samples with >= 2 distinct positive powers, got {len(samples)} samples"
        )
    pmax = p.max()
    if starts is None:
        starts = (pmax / 4, pmax / 2, pmax, 2 * pmax)
    a0 = max(y.max(), 1e-12)

    # p_peak is solved in log space so iterates stay positive
    def resid(theta):
        return _sin2_law(theta[0], math.exp(theta[1]), p) - y

    best = None
    failures = []
    for s0 in starts:
        sol = least_squares(resid, x0=[a0, math.log(s0)], method="lm", xtol=1e-9, ftol=1e-15,
                            gtol=1e-15, max_nfev=max_iter, x_scale="jac")
        if sol.status <= 0 or not np.all(np.isfinite(sol.fun)):
            failures.append((s0, float(np.sqrt(np.mean(sol.fun ** 2)))))
            continue
        rms = float(np.sqrt(np.mean(sol.fun ** 2)))
        if best is None or rms < best.rms_residual:
            best = SineSquaredFit(float(sol.x[0]), math.exp(sol.x[1]), rms, float(s0), int(sol.nfev))
    if best is None:
        report = ", ".join(f"start {s:.4g} W: rms {r:.3e}" for s, r in failures)
        raise FitError(f"sine-squared fit did not converge ({report})")
    return best


def fit_polynomial(samples: Iterable[PowerCountSample], degree: int) -> np.ndarray:
    """Ordinary least-squares polynomial in pump power.

    Coefficients are returned lowest order first.
    """
    if not 0 <= degree <= 3:
        raise FitError(f"degree must be in 0..3, got {degree}")
    samples = list(samples)
    if len(samples) <= degree:
        raise FitError(f"need more than {degree} samples for degree {degree}, got {len(samples)}")
    p = np.array([s.pump_power for s in samples], dtype=float)
    y = np.array([s.value for s in samples], dtype=float)
    X = np.vander(p, degree + 1, increasing=True)
    coef, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < degree + 1:
        raise FitError(f"rank-deficient design ({np.unique(p).size} distinct powers for degree {degree})")
    return coef


def polynomial_value(coefficients, pump_power):
    return np.polynomial.polynomial.polyval(pump_power, coefficients)
