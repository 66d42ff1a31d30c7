"""Gated photon-counting statistics and Monte Carlo count simulation.

Random numbers come from numpy's PCG64 bit generator seeded with the user
seed (``numpy.random.default_rng(seed)``). Draw order is fixed, so a seed
and a set of inputs always give the same result.

Dead time and afterpulsing are not modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dispersion import CONSTANTS, PhysicalConstants
from .errors import DomainError, ResourceError, ValidationError

MAX_GATES = 10 ** 9
_CHUNK = 1 << 20


@dataclass(frozen=True)
class GatedSource:
    photon_rate: float = 1e6
    gate_width: float = 1e-9
    gate_rate: float = 1e6

    def __post_init__(self):
        for name in ("photon_rate", "gate_width", "gate_rate"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"{name} must be positive and finite, got {v}")
        if self.gate_width * self.gate_rate > 1:
            raise ValidationError(
                f"duty cycle gate_width*gate_rate = {self.gate_width * self.gate_rate} exceeds 1"
            )


@dataclass(frozen=True)
class CountingResult:
    signal_counts: int
    noise_counts: int
    elapsed: float
    snr: float
    seed: int
    gates: int
    bins: tuple[int, ...] = ()
    """Total clicks per one-second bin (last bin may be partial)."""

    @property
    def total_counts(self) -> int:
        return self.signal_counts + self.noise_counts


def mean_photons_per_gate(source: GatedSource) -> float:
    return source.photon_rate * source.gate_width


def click_probability(mu: float, eta_sys: float, noise_rate: float, gate_width: float) -> float:
    """Probability of at least one click in a gate (Poisson signal + ungated noise)."""
    if min(mu, eta_sys, noise_rate, gate_width) < 0:
        raise DomainError("click_probability arguments must be non-negative")
    if eta_sys > 1:
        raise DomainError(f"eta_sys must be <= 1, got {eta_sys}")
    return -math.expm1(-(mu * eta_sys + noise_rate * gate_width))


def snr(signal_rate: float, noise_rate: float, integration_time: float) -> float:
    """Shot-noise-limited SNR, S T / sqrt((S + N) T)."""
    if signal_rate < 0 or noise_rate < 0:
        raise DomainError("rates must be non-negative")
    if not integration_time > 0:
        raise DomainError(f"integration_time must be > 0 s, got {integration_time}")
    total = (signal_rate + noise_rate) * integration_time
    if total == 0:
        return 0.0
    return signal_rate * integration_time / math.sqrt(total)


def nep(wavelength: float, eta_sys: float, noise_rate: float,
        constants: PhysicalConstants = CONSTANTS) -> float:
    """Noise-equivalent power in W/sqrt(Hz): (h c / lambda) sqrt(2 R_noise) / eta_sys."""
    if not eta_sys > 0:
        raise DomainError(f"eta_sys must be > 0, got {eta_sys}")
    if not wavelength > 0:
        raise DomainError(f"wavelength must be > 0 um, got {wavelength}")
    if noise_rate < 0:
        raise DomainError(f"noise_rate must be >= 0, got {noise_rate}")
    return constants.photon_energy(wavelength) * math.sqrt(2 * noise_rate) / eta_sys


def simulate_counts(source: GatedSource, eta_sys: float, noise_rate: float,
                    duration: float, seed: int) -> CountingResult:
    """Per-gate Bernoulli simulation.

    In each gate a signal click fires with probability ``1 - exp(-mu eta)``
    and a noise click independently with ``1 - exp(-R tau)``; the gate
    registers at most one click, credited to the signal when both fire.
    The combined click probability equals :func:`click_probability`.
    """
    if not duration > 0:
        raise DomainError(f"duration must be > 0 s, got {duration}")
    n_gates = int(round(duration * source.gate_rate))
    if n_gates > MAX_GATES:
        raise ResourceError(
            f"{n_gates} gates exceeds the {MAX_GATES} limit; use click_probability for the analytic rate"
        )
    mu = mean_photons_per_gate(source)
    p_sig = click_probability(mu, eta_sys, 0.0, source.gate_width)
    p_noise = click_probability(0.0, 0.0, noise_rate, source.gate_width)

    rng = np.random.default_rng(seed)
    gates_per_bin = max(int(round(source.gate_rate)), 1)
    sig_total = 0
    noise_total = 0
    bins: list[int] = []
    in_bin = 0
    filled = 0
    done = 0
    while done < n_gates:
        n = min(_CHUNK, n_gates - done, gates_per_bin - filled)
        sig = rng.random(n) < p_sig
        noi = (rng.random(n) < p_noise) & ~sig
        s, k = int(np.count_nonzero(sig)), int(np.count_nonzero(noi))
        sig_total += s
        noise_total += k
        in_bin += s + k
        filled += n
        done += n
        if filled == gates_per_bin or done == n_gates:
            bins.append(in_bin)
            in_bin = 0
            filled = 0
    elapsed = n_gates / source.gate_rate
    total = sig_total + noise_total
    ratio = sig_total / math.sqrt(total) if total else 0.0
    return CountingResult(sig_total, noise_total, elapsed, ratio, seed, n_gates, tuple(bins))
