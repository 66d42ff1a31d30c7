"""Pump-power sweeps and operating-point optimization."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, TextIO

import numpy as np

from .budget import DetectionSystem, system_efficiency
from .conversion import ConversionModel, signal_depletion_db
from .counting import GatedSource, mean_photons_per_gate, nep, snr
from .errors import ValidationError
from .noise import noise_rate

OBJECTIVES = ("max_de", "max_snr", "min_nep")
_INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class SweepSpec:
    power_min: float = 0.0
    power_max: float = 1.0
    points: int = 101
    objective: str = "max_de"

    def __post_init__(self):
        if not 0 <= self.power_min < self.power_max:
            raise ValidationError(
                f"need 0 <= power_min < power_max, got [{self.power_min}, {self.power_max}] W"
            )
        if int(self.points) != self.points or self.points < 2:
            raise ValidationError(f"points must be an integer >= 2, got {self.points}")
        if self.objective not in OBJECTIVES:
            raise ValidationError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.power_min, self.power_max, int(self.points))


@dataclass(frozen=True)
class Table:
    columns: tuple[str, ...]
    data: np.ndarray

    def __len__(self):
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def write_csv(self, fh: TextIO) -> None:
        fh.write(",".join(self.columns) + "\n")
        for row in self.data:
            fh.write(",".join(format_number(v) for v in row) + "\n")

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def format_number(v: float) -> str:
    """9 significant digits, locale independent."""
    return format(float(v), ".9g")


def de_noise_curve(system: DetectionSystem, spec: SweepSpec) -> Table:
    p = spec.grid()
    de = system_efficiency(system, p)
    nr = noise_rate(system.noise, system.conversion, p)
    return Table(("power_W", "de", "noise_cps"), np.column_stack([p, de, nr]))


def depletion_curve(model: ConversionModel, spec: SweepSpec) -> Table:
    p = spec.grid()
    d = np.array([signal_depletion_db(model, x) for x in p])
    return Table(("power_W", "depletion_dB"), np.column_stack([p, d]))


def objective_function(system: DetectionSystem, objective: str,
                       source: GatedSource | None = None) -> Callable[[float], float]:
    """Score to maximize at a pump power (NEP is negated)."""
    source = source or GatedSource()
    mu = mean_photons_per_gate(source)

    if objective == "max_de":
        return lambda p: float(system_efficiency(system, p))
    if objective == "max_snr":
        def f(p):
            s = mu * float(system_efficiency(system, p)) * source.gate_rate
            return snr(s, noise_rate(system.noise, system.conversion, p), 1.0)
        return f
    if objective == "min_nep":
        def g(p):
            eta = float(system_efficiency(system, p))
            if eta <= 0:
                return -math.inf
            return -nep(system.noise.signal_wavelength, eta, noise_rate(system.noise, system.conversion, p))
        return g
    raise ValidationError(f"objective must be one of {OBJECTIVES}, got {objective!r}")


@dataclass(frozen=True)
class Optimum:
    power: float
    value: float
    objective: str
    refined: bool
    warning: str | None = None
    evaluations: int = field(default=0, compare=False)


def golden_section_max(f: Callable[[float], float], a: float, b: float,
                       rtol: float = 1e-6) -> tuple[float, float, int]:
    """Maximize a unimodal ``f`` on ``[a, b]``; stops when the bracket is below
    ``rtol`` relative to its midpoint. Returns (x, f(x), evaluations)."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    n = 2
    while (b - a) > rtol * max(abs(0.5 * (a + b)), 1e-300):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        n += 1
    x = 0.5 * (a + b)
    return x, f(x), n + 1


def optimize_pump(system: DetectionSystem, spec: SweepSpec,
                  source: GatedSource | None = None) -> Optimum:
    """Coarse grid scan then golden-section refinement around the best point.

    The returned ``value`` is the objective in natural units (NEP in W/sqrt(Hz)).
    If the three points around the coarse optimum are not strictly unimodal
    the coarse optimum is returned with ``warning`` set.
    """
    f = objective_function(system, spec.objective, source)
    grid = spec.grid()
    scores = np.array([f(p) for p in grid])
    if not np.any(np.isfinite(scores)):
        raise ValidationError("objective is undefined on the whole power interval")
    i = int(np.nanargmax(np.where(np.isfinite(scores), scores, -np.inf)))
    sign = -1.0 if spec.objective == "min_nep" else 1.0

    def done(p, v, refined, warning=None, evals=len(grid)):
        return Optimum(float(p), sign * float(v), spec.objective, refined, warning, evals)

    if i == 0 or i == len(grid) - 1:
        return done(grid[i], scores[i], False, "optimum at interval boundary; not refined")
    if not (scores[i] > scores[i - 1] and scores[i] > scores[i + 1]):
        return done(grid[i], scores[i], False, "coarse bracket not unimodal; not refined")
    x, fx, n = golden_section_max(f, grid[i - 1], grid[i + 1])
    if fx < scores[i]:
        # grid point already sits on the optimum to rounding
        return done(grid[i], scores[i], True, None, len(grid) + n)
    return done(x, fx, True, None, len(grid) + n)
