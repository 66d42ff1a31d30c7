"""Loss-chain accounting from the input fiber to a detector click.

Sign convention: user-facing dB values are negative for attenuation
(``-4.5`` dB means 4.5 dB of loss); :class:`LossElement` stores the
positive attenuation ``loss_db``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .conversion import ConversionModel, internal_efficiency
from .errors import DomainError, ValidationError
from .noise import RamanConfig


def db_to_fraction(db: float) -> float:
    """Power ratio for a dB value; ``-3.0103`` dB gives 0.5."""
    if db > 0:
        raise DomainError(f"expected attenuation (<= 0 dB), got {db} dB")
    return 10.0 ** (db / 10.0)


def fraction_to_db(f: float) -> float:
    if not 0 < f <= 1:
        raise DomainError(f"fraction must lie in (0, 1], got {f}")
    return 10.0 * math.log10(f)


@dataclass(frozen=True)
class LossElement:
    name: str
    loss_db: float

    def __post_init__(self):
        if not (self.loss_db >= 0 and math.isfinite(self.loss_db)):
            raise ValidationError(f"element {self.name!r}: loss_db must be finite and >= 0, got {self.loss_db}")

    @classmethod
    def from_db(cls, name: str, db: float) -> LossElement:
        """From a signed value as written in configuration files (``-4.5``)."""
        if db > 0:
            raise ValidationError(f"element {name!r}: gain of {db} dB is not a loss")
        return cls(name, -db)

    @classmethod
    def from_efficiency(cls, name: str, efficiency: float) -> LossElement:
        if not 0 < efficiency <= 1:
            raise ValidationError(f"element {name!r}: efficiency must lie in (0, 1], got {efficiency}")
        return cls(name, -fraction_to_db(efficiency))

    @property
    def efficiency(self) -> float:
        return 10.0 ** (-self.loss_db / 10.0)


def chain_transmission(chain: Sequence[LossElement]) -> float:
    if len(chain) == 0:
        raise ValidationError("loss chain is empty")
    t = 1.0
    for el in chain:
        eff = el.efficiency
        if not 0 < eff <= 1:
            raise ValidationError(f"element {el.name!r} has efficiency {eff} outside (0, 1]")
        t *= eff
    return t


@dataclass(frozen=True)
class DetectionSystem:
    chain: tuple[LossElement, ...]
    conversion: ConversionModel = field(default_factory=ConversionModel)
    detector_efficiency: float = 0.45
    noise: RamanConfig = field(default_factory=RamanConfig)

    def __post_init__(self):
        object.__setattr__(self, "chain", tuple(self.chain))
        if len(self.chain) == 0:
            raise ValidationError("detection system needs a non-empty loss chain")
        if not 0 < self.detector_efficiency <= 1:
            raise ValidationError(f"detector efficiency must lie in (0, 1], got {self.detector_efficiency}")

    @property
    def transmission(self) -> float:
        return chain_transmission(self.chain)

    def with_element(self, element: LossElement) -> DetectionSystem:
        return DetectionSystem(self.chain + (element,), self.conversion, self.detector_efficiency, self.noise)


def system_efficiency(system: DetectionSystem, pump_power):
    """End-to-end detection efficiency: chain x internal conversion x detector."""
    return system.transmission * internal_efficiency(system.conversion, pump_power) * system.detector_efficiency


def reference_chain() -> tuple[LossElement, ...]:
    """Waveguide throughput, WDM, and free-space path losses at 2 um."""
    return (
        LossElement.from_db("waveguide", -4.5),
        LossElement.from_db("wdm", -1.0),
        LossElement.from_db("free_space", -0.8),
    )


def vbg_element(reflection: float = 0.95) -> LossElement:
    return LossElement.from_efficiency("vbg", reflection)
