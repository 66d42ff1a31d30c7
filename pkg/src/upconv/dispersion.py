"""Physical constants and the extraordinary index of congruent lithium niobate.

Wavelengths are in micrometres and temperatures in degrees Celsius at every
public entry point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import constants as _sc

from .errors import DomainError

T_MIN_C = 20.0
T_MAX_C = 200.0

# Central-difference step for the numeric derivative (um).
FD_STEP_UM = 1e-4


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = _sc.c
    h: float = _sc.h
    hbar: float = _sc.hbar
    k_B: float = _sc.k

    def omega(self, wavelength_um: float) -> float:
        """Angular frequency (rad/s) of light at ``wavelength_um``."""
        return 2.0 * math.pi * self.c / (wavelength_um * 1e-6)

    def photon_energy(self, wavelength_um: float) -> float:
        """Photon energy h*c/lambda in joules."""
        return self.h * self.c / (wavelength_um * 1e-6)


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class SellmeierCoefficients:
    """Temperature-dependent Sellmeier terms.

    n^2 = a1 + b1 f + (a2 + b2 f) / (lam^2 - (a3 + b3 f)^2)
          + (a4 + b4 f) / (lam^2 - a5^2) - a6 lam^2
    with f = (T - 24.5)(T + 570.82), T in degC and lam in um.
    """

    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    a6: float
    b1: float
    b2: float
    b3: float
    b4: float

    @classmethod
    def names(cls) -> tuple[str, ...]:
        return ("a1", "a2", "a3", "a4", "a5", "a6", "b1", "b2", "b3", "b4")


JUNDT_1997_CLN_E = SellmeierCoefficients(
    a1=5.35583, a2=0.100473, a3=0.20692, a4=100.0, a5=11.34927, a6=1.5334e-2,
    b1=4.629e-7, b2=3.862e-8, b3=-0.89e-8, b4=2.657e-5,
)


@dataclass(frozen=True)
class IndexOffset:
    """Constant index shift applied inside ``[lo_um, hi_um]``."""

    lo_um: float
    hi_um: float
    delta_n: float


@dataclass(frozen=True)
class SellmeierModel:
    coefficients: SellmeierCoefficients = JUNDT_1997_CLN_E
    validity_range: tuple[float, float] = (0.4, 5.0)
    reference_note: str = (
        "D. H. Jundt, Opt. Lett. 22, 1553 (1997): congruent LiNbO3, "
        "extraordinary ray, 0.4-5 um, 20-250 degC"
    )
    offsets: tuple[IndexOffset, ...] = field(default=())

    def __post_init__(self):
        lo, hi = self.validity_range
        if not 0 < lo < hi:
            raise DomainError(f"validity_range must satisfy 0 < lo < hi, got {self.validity_range}")

    def with_offsets(self, *offsets: IndexOffset) -> SellmeierModel:
        return replace(self, offsets=tuple(offsets))


DEFAULT_MODEL = SellmeierModel()


def _check_temperature(temperature: float) -> None:
    if not (T_MIN_C <= temperature <= T_MAX_C) or math.isnan(temperature):
        raise DomainError(
            f"temperature={temperature} degC outside [{T_MIN_C}, {T_MAX_C}] degC"
        )


def _check_wavelength(model: SellmeierModel, wavelength, margin: float = 0.0) -> None:
    lo, hi = model.validity_range
    w = np.atleast_1d(np.asarray(wavelength, dtype=float))
    bad = ~np.isfinite(w) | (w < lo + margin) | (w > hi - margin)
    if bad.any():
        raise DomainError(
            f"wavelength={w[bad][0]} um outside validity range "
            f"[{lo + margin}, {hi - margin}] um"
        )


def _terms(c: SellmeierCoefficients, temperature: float):
    f = (temperature - 24.5) * (temperature + 570.82)
    return c.a1 + c.b1 * f, c.a2 + c.b2 * f, (c.a3 + c.b3 * f) ** 2, c.a4 + c.b4 * f, c.a5 ** 2, c.a6


def _offset(model: SellmeierModel, lam):
    out = np.zeros_like(lam, dtype=float)
    for off in model.offsets:
        out = out + np.where((lam >= off.lo_um) & (lam <= off.hi_um), off.delta_n, 0.0)
    return out


def _bulk_index(model: SellmeierModel, lam, temperature: float):
    g1, g2, g3sq, g4, a5sq, a6 = _terms(model.coefficients, temperature)
    lam2 = lam * lam
    return np.sqrt(g1 + g2 / (lam2 - g3sq) + g4 / (lam2 - a5sq) - a6 * lam2)


def refractive_index(model: SellmeierModel, wavelength, temperature: float):
    """Extraordinary index n_e at ``wavelength`` (um) and ``temperature`` (degC).

    Accepts scalars or arrays; scalars give a Python float.
    """
    _check_temperature(temperature)
    _check_wavelength(model, wavelength)
    lam = np.asarray(wavelength, dtype=float)
    n = _bulk_index(model, lam, temperature) + _offset(model, lam)
    return float(n) if n.ndim == 0 else n


def dn_dlambda(model: SellmeierModel, wavelength, temperature: float):
    """Analytic dn/dlambda in 1/um (offsets are piecewise constant)."""
    _check_temperature(temperature)
    _check_wavelength(model, wavelength)
    lam = np.asarray(wavelength, dtype=float)
    _, g2, g3sq, g4, a5sq, a6 = _terms(model.coefficients, temperature)
    lam2 = lam * lam
    dn2 = -2 * lam * (g2 / (lam2 - g3sq) ** 2 + g4 / (lam2 - a5sq) ** 2 + a6)
    d = dn2 / (2 * _bulk_index(model, lam, temperature))
    return float(d) if d.ndim == 0 else d


def dn_dlambda_numeric(model: SellmeierModel, wavelength, temperature: float, step: float = FD_STEP_UM):
    """Central-difference dn/dlambda; needs ``step`` of room inside the validity range."""
    if not 0 < step <= FD_STEP_UM:
        raise DomainError(f"step={step} must be in (0, {FD_STEP_UM}] um")
    _check_temperature(temperature)
    _check_wavelength(model, wavelength, margin=step)
    lam = np.asarray(wavelength, dtype=float)
    d = (_bulk_index(model, lam + step, temperature) - _bulk_index(model, lam - step, temperature)) / (2 * step)
    return float(d) if d.ndim == 0 else d


def group_index(model: SellmeierModel, wavelength, temperature: float, method: str = "analytic"):
    """Group index n - lambda dn/dlambda.

    ``method`` is ``"analytic"`` or ``"central"``. Both require the wavelength
    to sit at least one stencil step inside the validity range.
    """
    _check_temperature(temperature)
    _check_wavelength(model, wavelength, margin=FD_STEP_UM)
    if method == "analytic":
        d = dn_dlambda(model, wavelength, temperature)
    elif method == "central":
        d = dn_dlambda_numeric(model, wavelength, temperature)
    else:
        raise ValueError(f"unknown method {method!r}")
    lam = np.asarray(wavelength, dtype=float)
    ng = refractive_index(model, lam, temperature) - lam * d
    return float(ng) if np.ndim(ng) == 0 else ng
