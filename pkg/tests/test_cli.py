import csv
import math

import pytest

from upconv.cli import EXIT_IO, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, main
from upconv.config import REFERENCE_CONFIG, parse_config
from upconv.errors import ValidationError


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "system.ini"
    p.write_text(REFERENCE_CONFIG)
    return p


def kv(text):
    out = {}
    for line in text.splitlines():
        if "=" in line and " " not in line.split("=", 1)[0]:
            k, v = line.split("=", 1)
            out[k] = v
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_reference_config_parses():
    cfg = parse_config(REFERENCE_CONFIG)
    assert cfg.grating.length == pytest.approx(0.052)
    assert cfg.grating.period == pytest.approx(23.6118648, rel=1e-8)
    assert cfg.system.noise.temperature == pytest.approx(333.15)
    assert [e.name for e in cfg.system.chain] == ["waveguide", "wdm", "free_space"]
    assert cfg.vbg_reflection == 0.95


def test_unknown_key_rejected():
    with pytest.raises(ValidationError, match="p_peak_W"):
        parse_config(REFERENCE_CONFIG.replace("p_peak_mW = 300", "p_peak_W = 0.3"))


def test_unknown_section_rejected():
    with pytest.raises(ValidationError, match="pumpp"):
        parse_config(REFERENCE_CONFIG + "\n[pumpp]\nx = 1\n")


def test_invariants_revalidated_on_load():
    with pytest.raises(ValidationError):
        parse_config(REFERENCE_CONFIG.replace("eta_max = 0.995533", "eta_max = 1.5"))
    with pytest.raises(ValidationError):
        parse_config(REFERENCE_CONFIG.replace("wdm = -1.0", "wdm = 1.0"))
    with pytest.raises(ValidationError):
        parse_config(REFERENCE_CONFIG.replace("length_mm = 52", "length_mm = abc"))


def test_fixed_period_and_sellmeier_override():
    cfg = parse_config(REFERENCE_CONFIG.replace("period_um = auto", "period_um = 19.6")
                       + "\n[sellmeier]\na1 = 5.36\n")
    assert cfg.grating.period == 19.6
    assert cfg.dispersion.coefficients.a1 == 5.36


def test_pm_curve(capsys, cfg_path, tmp_path):
    out = tmp_path / "pm.csv"
    code, stdout, _ = run(capsys, "pm-curve", "--config", cfg_path, "--out", out)
    assert code == EXIT_OK
    fwhm = float(kv(stdout)["fwhm_nm"])
    assert fwhm == pytest.approx(0.9425, abs=5e-4)
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["wavelength_nm", "response"]
    assert len(rows) - 1 == 401
    assert max(float(r[1]) for r in rows[1:]) == pytest.approx(1.0, abs=1e-9)


def test_missing_config(capsys, tmp_path):
    missing = tmp_path / "nope.ini"
    code, _, err = run(capsys, "pm-curve", "--config", missing, "--out", tmp_path / "x.csv")
    assert code == EXIT_IO
    assert str(missing) in err
    assert err.count("\n") == 1 and err.startswith("upconv: error=io")


def test_simulate(capsys, cfg_path, tmp_path):
    code, stdout, _ = run(capsys, "simulate", "--config", cfg_path, "--out", tmp_path / "a")
    assert code == EXIT_OK
    fields = dict(tok.split("=") for tok in stdout.split()[1:])
    assert float(fields["de"]) == pytest.approx(0.105, abs=5e-4)
    assert float(fields["noise_cps"]) == pytest.approx(24500, rel=1e-9)
    assert (tmp_path / "a" / "de_noise.csv").read_text().splitlines()[0] == "power_W,de,noise_cps"
    assert (tmp_path / "a" / "depletion.csv").read_text().splitlines()[0] == "power_W,depletion_dB"


def test_simulate_two_points(capsys, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text(REFERENCE_CONFIG.replace("points = 101", "points = 2"))
    assert run(capsys, "simulate", "--config", cfg, "--out", tmp_path / "o")[0] == EXIT_OK
    assert len((tmp_path / "o" / "de_noise.csv").read_text().splitlines()) == 3
    assert len((tmp_path / "o" / "depletion.csv").read_text().splitlines()) == 3


def test_simulate_byte_identical(capsys, cfg_path, tmp_path):
    run(capsys, "simulate", "--config", cfg_path, "--out", tmp_path / "a")
    run(capsys, "simulate", "--config", cfg_path, "--out", tmp_path / "b")
    for name in ("de_noise.csv", "depletion.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_budget(capsys, cfg_path):
    code, stdout, _ = run(capsys, "budget", "--config", cfg_path)
    assert code == EXIT_OK
    values = kv(stdout)
    assert float(values["system_efficiency"]) == pytest.approx(0.105, abs=5e-4)
    assert float(values["system_efficiency_with_vbg"]) == pytest.approx(0.100, abs=5e-4)
    element_lines = [l.split() for l in stdout.splitlines()[1:4]]
    total = sum(float(parts[1]) for parts in element_lines)
    assert abs(total - float(values["total_dB"])) < 1e-9


def test_budget_empty_chain(capsys, tmp_path):
    cfg = tmp_path / "c.ini"
    text = REFERENCE_CONFIG.replace("waveguide = -4.5\nwdm = -1.0\nfree_space = -0.8\n", "")
    cfg.write_text(text)
    code, _, err = run(capsys, "budget", "--config", cfg)
    assert code == EXIT_VALIDATION
    assert "chain" in err


def test_noise_ratio(capsys):
    code, stdout, _ = run(capsys, "noise-ratio", "1950e-3", "1550e-3", "333.15")
    assert code == EXIT_OK
    v = kv(stdout)
    assert float(v["ratio"]) == pytest.approx(6.56e-3, abs=5e-6)
    assert float(v["reciprocal"]) == pytest.approx(152.4, abs=0.1)


def test_noise_ratio_equal_wavelengths(capsys):
    code, _, err = run(capsys, "noise-ratio", "1.55", "1.55", "300")
    assert code == EXIT_VALIDATION and "error=validation" in err


def test_noise_ratio_temperature_monotone(capsys):
    lo = float(kv(run(capsys, "noise-ratio", "1.95", "1.55", "300")[1])["ratio"])
    hi = float(kv(run(capsys, "noise-ratio", "1.95", "1.55", "350")[1])["ratio"])
    assert hi > lo


def test_depletion_command(capsys):
    code, stdout, _ = run(capsys, "depletion", "--", "-23.5")
    assert code == EXIT_OK and "percent=99.6%" in stdout


def _write_samples(path, rows):
    with path.open("w") as fh:
        fh.write("power_mW,value\n")
        for p, v in rows:
            fh.write(f"{p!r},{v!r}\n")


def test_fit_sine2(capsys, tmp_path):
    data = tmp_path / "de.csv"
    powers = [60 * (k + 1) for k in range(10)]
    _write_samples(data, [(p, 0.1025 * math.sin(math.pi / 2 * math.sqrt(p / 300)) ** 2) for p in powers])
    code, stdout, _ = run(capsys, "fit", "--data", data, "--model", "sine2")
    assert code == EXIT_OK
    v = kv(stdout)
    assert float(v["amplitude"]) == pytest.approx(0.1025, rel=1e-6)
    assert float(v["p_peak_mW"]) == pytest.approx(300, rel=1e-6)


def test_fit_poly(capsys, tmp_path):
    data = tmp_path / "n.csv"
    _write_samples(data, [(0, 5.0), (1000, 7.0), (2500, 10.0)])
    code, stdout, _ = run(capsys, "fit", "--data", data, "--model", "poly:1")
    assert code == EXIT_OK
    v = kv(stdout)
    assert float(v["c0"]) == pytest.approx(5.0, abs=1e-9)
    assert float(v["c1"]) == pytest.approx(2.0, abs=1e-9)


def test_fit_too_few_samples(capsys, tmp_path):
    data = tmp_path / "d.csv"
    _write_samples(data, [(100, 0.05), (200, 0.08)])
    code, _, err = run(capsys, "fit", "--data", data, "--model", "sine2")
    assert code == EXIT_NUMERICAL and "error=numerical" in err


def test_usage_error(capsys):
    code, _, err = run(capsys, "fly")
    assert code == EXIT_VALIDATION
    assert err.startswith("upconv: error=validation")


def test_optimize(capsys, cfg_path):
    code, stdout, _ = run(capsys, "optimize", "--config", cfg_path)
    assert code == EXIT_OK
    assert float(kv(stdout)["power_W"]) == pytest.approx(0.3, rel=1e-6)
