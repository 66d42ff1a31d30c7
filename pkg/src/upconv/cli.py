"""Command-line front end.

Exit status: 0 success, 2 validation or usage error, 3 I/O error,
4 numerical failure. Errors print one line to stderr of the form
``upconv: error=<kind> reason=<text>``.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .budget import chain_transmission, system_efficiency, vbg_element
from .config import REFERENCE_CONFIG, load_config
from .conversion import (
    PowerCountSample,
    conversion_from_depletion,
    fit_polynomial,
    fit_sine_squared,
    internal_efficiency,
    polynomial_value,
)
from .errors import FitError, NoPhaseMatchError, ResourceError, UpconvError
from .noise import anti_stokes_stokes_ratio, noise_rate
from .qpm import phase_matched_signal, pm_bandwidth_fwhm, tuning_curve
from .sweep import Table, de_noise_curve, depletion_curve, format_number, optimize_pump

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail("validation", message)
        sys.exit(EXIT_VALIDATION)


def _fail(kind: str, reason: str) -> None:
    print(f"upconv: error={kind} reason={' '.join(str(reason).split())}", file=sys.stderr)


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_pm_curve(args) -> int:
    cfg = load_config(args.config)
    pump = cfg.triple.pump_wavelength
    center = phase_matched_signal(cfg.grating, pump, cfg.dispersion, guess=cfg.triple.signal_wavelength)
    half = cfg.tuning_span_nm * 1e-3 / 2
    grid = np.linspace(center - half, center + half, cfg.tuning_points)
    lam, resp = tuning_curve(cfg.grating, pump, grid, cfg.dispersion)
    fwhm = pm_bandwidth_fwhm(cfg.grating, pump, cfg.dispersion, guess=center)
    _write(args.out, Table(("wavelength_nm", "response"), np.column_stack([lam * 1e3, resp])).to_csv())
    print(f"period_um={format_number(cfg.grating.period)}")
    print(f"phase_matched_signal_nm={format_number(center * 1e3)}")
    print(f"fwhm_nm={format_number(fwhm)}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    system = cfg.system
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "de_noise.csv", de_noise_curve(system, cfg.sweep).to_csv())
    _write(out / "depletion.csv", depletion_curve(system.conversion, cfg.sweep).to_csv())
    p = cfg.calibration_power
    de = float(system_efficiency(system, p))
    nr = noise_rate(system.noise, system.conversion, p)
    print(f"operating_point power_W={format_number(p)} de={format_number(de)} noise_cps={format_number(nr)}")
    return EXIT_OK


def cmd_optimize(args) -> int:
    cfg = load_config(args.config)
    opt = optimize_pump(cfg.system, cfg.sweep, cfg.source)
    print(f"objective={opt.objective}")
    print(f"power_W={format_number(opt.power)}")
    print(f"value={format_number(opt.value)}")
    if opt.warning:
        print(f"warning={opt.warning}")
    return EXIT_OK


def _read_samples(path, kind: str) -> list[PowerCountSample]:
    samples = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                p_mw, value = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if not samples:
                    continue  # header line
                raise FitError(f"{path}: malformed row {row!r}") from None
            samples.append(PowerCountSample(p_mw * 1e-3, value, kind))
    return samples


def cmd_fit(args) -> int:
    model = args.model
    if model == "sine2":
        samples = _read_samples(args.data, "efficiency")
        fit = fit_sine_squared(samples)
        print("model=sine2")
        print(f"amplitude={format_number(fit.amplitude)}")
        print(f"p_peak_mW={format_number(fit.p_peak * 1e3)}")
        print(f"rms_residual={format_number(fit.rms_residual)}")
        print(f"samples={len(samples)}")
        return EXIT_OK
    if model.startswith("poly:"):
        try:
            degree = int(model.split(":", 1)[1])
        except ValueError:
            raise FitError(f"bad polynomial degree in {model!r}") from None
        samples = _read_samples(args.data, "noise")
        coef = fit_polynomial(samples, degree)
        p = np.array([s.pump_power for s in samples])
        y = np.array([s.value for s in samples])
        rms = math.sqrt(float(np.mean((polynomial_value(coef, p) - y) ** 2)))
        print(f"model=poly:{degree}")
        for k, c in enumerate(coef):
            print(f"c{k}={format_number(c)}")
        print("units=value per W^k")
        print(f"rms_residual={format_number(rms)}")
        print(f"samples={len(samples)}")
        return EXIT_OK
    raise FitError(f"unknown model {model!r}; use sine2 or poly:N")


def cmd_budget(args) -> int:
    cfg = load_config(args.config)
    system = cfg.system
    cumulative = 0.0
    print(f"{'element':<16}{'loss_dB':>12}{'cumulative_dB':>16}")
    for el in system.chain:
        cumulative -= el.loss_db
        print(f"{el.name:<16}{format_number(-el.loss_db):>12}{format_number(cumulative):>16}")
    t = chain_transmission(system.chain)
    p = system.conversion.p_peak
    eta_int = internal_efficiency(system.conversion, p)
    print(f"total_dB={format_number(cumulative)}")
    print(f"chain_transmission={format_number(t)}")
    print(f"internal_efficiency={format_number(eta_int)}")
    print(f"detector_efficiency={format_number(system.detector_efficiency)}")
    print(f"system_efficiency={format_number(system_efficiency(system, p))}")
    if cfg.vbg_reflection is not None:
        with_vbg = system.with_element(vbg_element(cfg.vbg_reflection))
        print(f"system_efficiency_with_vbg={format_number(system_efficiency(with_vbg, p))}")
    return EXIT_OK


def cmd_noise_ratio(args) -> int:
    r = anti_stokes_stokes_ratio(args.lambda_a, args.lambda_b, args.temperature_K)
    print(f"ratio={format_number(r)}")
    print(f"reciprocal={format_number(1 / r)}")
    return EXIT_OK


def cmd_depletion(args) -> int:
    eta = conversion_from_depletion(args.depletion_db)
    print(f"internal_efficiency={format_number(eta)}")
    print(f"percent={eta * 100:.3g}%")
    return EXIT_OK


def cmd_init_config(args) -> int:
    _write(args.out, REFERENCE_CONFIG)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="upconv", description="Upconversion single-photon detector modeling.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pm-curve", help="phase-matching tuning curve and FWHM")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_pm_curve)

    p = sub.add_parser("simulate", help="DE/noise and depletion curves versus pump power")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("optimize", help="optimize pump power for the configured objective")
    p.add_argument("--config", required=True, type=Path)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("fit", help="fit power/value CSV data")
    p.add_argument("--data", required=True, type=Path, help="CSV with columns power_mW,value")
    p.add_argument("--model", required=True, help="sine2 or poly:N (N <= 3)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("budget", help="loss budget report")
    p.add_argument("--config", required=True, type=Path)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("noise-ratio", help="anti-Stokes/Stokes thermal ratio")
    p.add_argument("lambda_a", type=float, help="longer wavelength, um")
    p.add_argument("lambda_b", type=float, help="shorter wavelength, um")
    p.add_argument("temperature_K", type=float)
    p.set_defaults(func=cmd_noise_ratio)

    p = sub.add_parser("depletion", help="internal efficiency from a depletion level")
    p.add_argument("depletion_db", type=float)
    p.set_defaults(func=cmd_depletion)

    p = sub.add_parser("init-config", help="write the reference configuration file")
    p.add_argument("--out", required=True, type=Path)
    p.set_defaults(func=cmd_init_config)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION
    try:
        return args.func(args)
    except OSError as exc:
        where = getattr(exc, "filename", None)
        _fail("io", f"{where}: {exc.strerror}" if where else str(exc))
        return EXIT_IO
    except (FitError, NoPhaseMatchError, ResourceError) as exc:
        _fail("numerical", str(exc))
        return EXIT_NUMERICAL
    except (UpconvError, ValueError) as exc:
        _fail("validation", str(exc))
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
