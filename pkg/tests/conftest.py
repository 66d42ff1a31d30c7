import pytest

from upconv.budget import DetectionSystem, reference_chain
from upconv.conversion import ConversionModel
from upconv.noise import RamanConfig, calibrated


@pytest.fixture
def conversion():
    return ConversionModel()


@pytest.fixture
def system(conversion):
    raman = calibrated(RamanConfig(), conversion, 0.300, 24500.0)
    return DetectionSystem(reference_chain(), conversion, 0.45, raman)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
