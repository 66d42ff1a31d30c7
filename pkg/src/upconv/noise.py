"""Spontaneous Raman noise: thermal anti-Stokes/Stokes ratio and count-rate law."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .conversion import ConversionModel, internal_efficiency
from .dispersion import CONSTANTS, PhysicalConstants
from .errors import CalibrationError, DomainError, ValidationError


@dataclass(frozen=True)
class RamanConfig:
    """Noise parameters of a pumped waveguide and its counting detector.

    ``kappa`` is a system-level coefficient (counts/s per W): it already
    includes filter bandwidths and collection losses, since it is fixed by
    calibration against a measured noise rate.
    """

    pump_wavelength: float = 1.550
    signal_wavelength: float = 1.950
    temperature: float = 333.15
    kappa: float = 0.0
    dark_rate: float = 25.0

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValidationError(f"temperature must be > 0 K, got {self.temperature}")
        if not self.kappa >= 0:
            raise ValidationError(f"kappa must be >= 0, got {self.kappa}")
        if not self.dark_rate >= 0:
            raise ValidationError(f"dark_rate must be >= 0, got {self.dark_rate}")
        if self.pump_wavelength == self.signal_wavelength:
            raise ValidationError("pump and signal wavelengths must differ")


def anti_stokes_stokes_ratio(lambda_a: float, lambda_b: float, temperature: float,
                             constants: PhysicalConstants = CONSTANTS) -> float:
    """Anti-Stokes rate pumped at ``lambda_a`` over Stokes rate pumped at ``lambda_b``.

    Convention: ``lambda_a > lambda_b``, so the frequency shift
    ``omega_b - omega_a`` is positive. The ratio is
    ``(omega_b / omega_a)^3 * exp(-hbar (omega_b - omega_a) / (k_B T))``.
    """
    if not lambda_a > lambda_b:
        raise DomainError(
            f"lambda_a ({lambda_a} um) must exceed lambda_b ({lambda_b} um) so the shift is positive"
        )
    if lambda_b <= 0:
        raise DomainError(f"wavelengths must be positive, got {lambda_b}")
    if not temperature > 0:
        raise DomainError(f"temperature must be > 0 K, got {temperature}")
    w_a = constants.omega(lambda_a)
    w_b = constants.omega(lambda_b)
    return (w_b / w_a) ** 3 * math.exp(-constants.hbar * (w_b - w_a) / (constants.k_B * temperature))


def noise_rate(config: RamanConfig, conversion: ConversionModel, pump_power):
    """Noise counts/s: dark counts plus Raman photons generated along the
    waveguide (linear in P) and upconverted with the same sin^2 law as the signal.
    """
    eta = internal_efficiency(conversion, pump_power)
    rate = config.dark_rate + config.kappa * np.asarray(pump_power, dtype=float) * (eta / conversion.eta_max)
    return float(rate) if np.ndim(rate) == 0 else rate


def calibrate_noise_coefficient(config: RamanConfig, conversion: ConversionModel,
                                pump_power: float, measured_rate: float) -> float:
    """Raman coefficient ``kappa`` that reproduces ``measured_rate`` at ``pump_power``.

    ``config.kappa`` is ignored.
    """
    if not pump_power > 0:
        raise CalibrationError(f"calibration pump power must be > 0 W, got {pump_power}")
    if not measured_rate > config.dark_rate:
        raise CalibrationError(
            f"measured rate {measured_rate} cps must exceed dark rate {config.dark_rate} cps"
        )
    shape = internal_efficiency(conversion, pump_power) / conversion.eta_max
    if not shape > 0:
        raise CalibrationError(f"no conversion at {pump_power} W, cannot calibrate")
    return (measured_rate - config.dark_rate) / (pump_power * shape)


def calibrated(config: RamanConfig, conversion: ConversionModel,
               pump_power: float, measured_rate: float) -> RamanConfig:
    """Copy of ``config`` with ``kappa`` set from one measured point."""
    kappa = calibrate_noise_coefficient(config, conversion, pump_power, measured_rate)
    return replace(config, kappa=kappa)


def interchanged_noise_rate(config: RamanConfig, conversion: ConversionModel, pump_power: float,
                            constants: PhysicalConstants = CONSTANTS) -> float:
    """Predicted noise when pump and signal wavelengths swap roles.

    The Raman part of ``noise_rate`` is scaled by the thermal ratio between
    anti-Stokes generation (long-wavelength pump) and Stokes generation
    (short-wavelength pump); dark counts are left unscaled.
    """
    long_wl = max(config.pump_wavelength, config.signal_wavelength)
    short_wl = min(config.pump_wavelength, config.signal_wavelength)
    ratio = anti_stokes_stokes_ratio(long_wl, short_wl, config.temperature, constants)
    raman = noise_rate(config, conversion, pump_power) - config.dark_rate
    if config.pump_wavelength > config.signal_wavelength:
        # already long-wavelength pumped; swapping makes it noisier
        return config.dark_rate + raman / ratio
    return config.dark_rate + raman * ratio
