"""Sectioned key-value system configuration (INI syntax).

Units are part of every key name. Unknown sections and keys are rejected;
keys left out take the reference values below. Chain entries are written
``name = loss_dB`` with negative numbers for attenuation.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from pathlib import Path

from .budget import DetectionSystem, LossElement, reference_chain, vbg_element
from .conversion import ConversionModel
from .counting import GatedSource
from .dispersion import DEFAULT_MODEL, SellmeierCoefficients, SellmeierModel
from .errors import ValidationError
from .noise import RamanConfig, calibrated
from .qpm import QpmGrating, SfgTriple, solve_qpm_period
from .sweep import SweepSpec

SCHEMA: dict[str, dict[str, object]] = {
    "grating": {"length_mm": 52.0, "period_um": "auto", "temperature_C": 60.0},
    "wavelengths": {"signal_nm": 1950.0, "pump_nm": 1550.0},
    "tuning": {"span_nm": 4.0, "points": 401},
    "conversion": {"eta_max": 1 - 10 ** (-2.35), "p_peak_mW": 300.0},
    "detector": {"efficiency": 0.45, "dark_cps": 25.0, "vbg_reflection": "none"},
    "noise": {"pump_power_mW": 300.0, "measured_noise_cps": 24500.0},
    "source": {"photon_rate_hz": 1e6, "gate_ns": 1.0, "gate_rate_hz": 1e6},
    "sweep": {"min_mW": 0.0, "max_mW": 1000.0, "points": 101, "objective": "max_de"},
    "sellmeier": {name: getattr(DEFAULT_MODEL.coefficients, name) for name in SellmeierCoefficients.names()},
}
FREE_FORM = ("chain",)

REFERENCE_CONFIG = """\
# Upconversion detector near 2 um, reference operating point.
[grating]
length_mm = 52
# fabricated period is 19.6 um; 'auto' solves the bulk-dispersion period
period_um = auto
temperature_C = 60

[wavelengths]
signal_nm = 1950
pump_nm = 1550

[tuning]
span_nm = 4
points = 401

[conversion]
eta_max = 0.995533
p_peak_mW = 300

[chain]
waveguide = -4.5
wdm = -1.0
free_space = -0.8

[detector]
efficiency = 0.45
dark_cps = 25
vbg_reflection = 0.95

[noise]
pump_power_mW = 300
measured_noise_cps = 24500

[source]
photon_rate_hz = 1e6
gate_ns = 1
gate_rate_hz = 1e6

[sweep]
min_mW = 0
max_mW = 1000
points = 101
objective = max_de
"""


@dataclass(frozen=True)
class SystemConfig:
    grating: QpmGrating
    triple: SfgTriple
    dispersion: SellmeierModel
    tuning_span_nm: float
    tuning_points: int
    system: DetectionSystem
    calibration_power: float
    calibration_rate: float
    vbg_reflection: float | None
    source: GatedSource
    sweep: SweepSpec


def _number(section: str, key: str, raw) -> float:
    try:
        v = float(raw)
    except (TypeError, ValueError):
        raise ValidationError(f"[{section}] {key}: not a number: {raw!r}") from None
    if not math.isfinite(v):
        raise ValidationError(f"[{section}] {key}: must be finite, got {raw!r}")
    return v


def _integer(section: str, key: str, raw) -> int:
    v = _number(section, key, raw)
    if v != int(v):
        raise ValidationError(f"[{section}] {key}: must be an integer, got {raw!r}")
    return int(v)


def parse_config(text: str, source_name: str = "<config>") -> SystemConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string(text, source=source_name)
    except configparser.Error as exc:
        raise ValidationError(f"{source_name}: {' '.join(str(exc).split())}") from None

    for section in cp.sections():
        if section not in SCHEMA and section not in FREE_FORM:
            raise ValidationError(f"unknown section [{section}]")
        if section in SCHEMA:
            for key in cp[section]:
                if key not in SCHEMA[section]:
                    raise ValidationError(f"unknown key '{key}' in section [{section}]")

    def get(section: str, key: str):
        if cp.has_section(section) and key in cp[section]:
            return cp[section][key]
        return SCHEMA[section][key]

    num = lambda s, k: _number(s, k, get(s, k))  # noqa: E731

    coeffs = SellmeierCoefficients(**{n: num("sellmeier", n) for n in SellmeierCoefficients.names()})
    dispersion = SellmeierModel(coefficients=coeffs) if coeffs != DEFAULT_MODEL.coefficients else DEFAULT_MODEL

    signal = num("wavelengths", "signal_nm") * 1e-3
    pump = num("wavelengths", "pump_nm") * 1e-3
    if signal <= 0 or pump <= 0:
        raise ValidationError("[wavelengths] values must be positive")
    triple = SfgTriple.from_inputs(signal, pump)

    temperature = num("grating", "temperature_C")
    raw_period = str(get("grating", "period_um")).strip()
    if raw_period.lower() == "auto":
        period = solve_qpm_period(triple, temperature, dispersion)
    else:
        period = _number("grating", "period_um", raw_period)
    grating = QpmGrating(length=num("grating", "length_mm") * 1e-3, period=period, temperature=temperature)

    span = num("tuning", "span_nm")
    if span <= 0:
        raise ValidationError("[tuning] span_nm must be > 0")
    tpoints = _integer("tuning", "points", get("tuning", "points"))
    if tpoints < 2:
        raise ValidationError("[tuning] points must be >= 2")

    conversion = ConversionModel(
        eta_max=num("conversion", "eta_max"),
        p_peak=num("conversion", "p_peak_mW") * 1e-3,
        length=grating.length,
    )

    if cp.has_section("chain"):
        chain = tuple(LossElement.from_db(name, _number("chain", name, raw)) for name, raw in cp["chain"].items())
        if not chain:
            raise ValidationError("[chain] is empty")
    else:
        chain = reference_chain()

    raw_vbg = str(get("detector", "vbg_reflection")).strip()
    vbg = None if raw_vbg.lower() == "none" else _number("detector", "vbg_reflection", raw_vbg)
    if vbg is not None:
        vbg_element(vbg)  # validates range

    cal_power = num("noise", "pump_power_mW") * 1e-3
    cal_rate = num("noise", "measured_noise_cps")
    raman = RamanConfig(
        pump_wavelength=pump,
        signal_wavelength=signal,
        temperature=temperature + 273.15,
        dark_rate=num("detector", "dark_cps"),
    )
    raman = calibrated(raman, conversion, cal_power, cal_rate)
    system = DetectionSystem(chain, conversion, num("detector", "efficiency"), raman)

    src = GatedSource(
        photon_rate=num("source", "photon_rate_hz"),
        gate_width=num("source", "gate_ns") * 1e-9,
        gate_rate=num("source", "gate_rate_hz"),
    )
    sweep = SweepSpec(
        power_min=num("sweep", "min_mW") * 1e-3,
        power_max=num("sweep", "max_mW") * 1e-3,
        points=_integer("sweep", "points", get("sweep", "points")),
        objective=str(get("sweep", "objective")).strip(),
    )
    return SystemConfig(grating, triple, dispersion, span, tpoints, system,
                        cal_power, cal_rate, vbg, src, sweep)


def load_config(path) -> SystemConfig:
    """Read and validate a configuration file. I/O failures raise ``OSError``."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_config(text, str(path))
