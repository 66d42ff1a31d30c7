import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from upconv.budget import (
    DetectionSystem,
    LossElement,
    chain_transmission,
    db_to_fraction,
    fraction_to_db,
    reference_chain,
    system_efficiency,
    vbg_element,
)
from upconv.errors import DomainError, ValidationError


def test_reference_chain_transmission():
    assert chain_transmission(reference_chain()) == pytest.approx(10 ** -0.63, rel=1e-14)
    assert chain_transmission(reference_chain()) == pytest.approx(0.2344, abs=1e-4)


def test_identity_element():
    assert chain_transmission([LossElement("splice", 0.0)]) == 1.0


def test_two_halves():
    half = LossElement.from_db("x", -3.0103)
    assert chain_transmission([half, half]) == pytest.approx(0.25, abs=1e-5)


def test_empty_chain():
    with pytest.raises(ValidationError):
        chain_transmission([])
    with pytest.raises(ValidationError):
        DetectionSystem(())


def test_element_validation():
    with pytest.raises(ValidationError):
        LossElement("amp", -1.0)
    with pytest.raises(ValidationError):
        LossElement.from_db("amp", 1.0)
    with pytest.raises(ValidationError):
        LossElement.from_efficiency("x", 0.0)
    with pytest.raises(ValidationError):
        LossElement.from_efficiency("x", 1.2)
    with pytest.raises(ValidationError):
        LossElement("x", float("inf"))


def test_element_representations_agree():
    el = LossElement.from_efficiency("vbg", 0.95)
    assert el.efficiency == pytest.approx(0.95, rel=1e-14)
    assert el.efficiency == pytest.approx(10 ** (-el.loss_db / 10), rel=1e-15)


def test_db_conversions():
    assert db_to_fraction(-3.0103) == pytest.approx(0.5, abs=1e-5)
    assert db_to_fraction(0.0) == 1.0
    assert fraction_to_db(1.0) == 0.0
    with pytest.raises(DomainError):
        fraction_to_db(0.0)
    with pytest.raises(DomainError):
        fraction_to_db(-0.1)
    with pytest.raises(DomainError):
        db_to_fraction(1.0)


@settings(max_examples=300)
@given(st.floats(1e-12, 1.0))
def test_fraction_round_trip(f):
    assert db_to_fraction(fraction_to_db(f)) == pytest.approx(f, rel=1e-12)


def test_permutation_invariance():
    chain = list(reference_chain()) + [vbg_element(0.95), LossElement("objective", 0.3)]
    ref = chain_transmission(chain)
    for perm in itertools.permutations(chain):
        assert chain_transmission(perm) == pytest.approx(ref, rel=1e-14)


def test_system_efficiency_reference(system):
    de = system_efficiency(system, 0.300)
    assert de == pytest.approx(0.2344 * 0.99553 * 0.45, rel=1e-3)
    assert de == pytest.approx(0.1050, abs=1e-4)
    assert system_efficiency(system, 0.0) == 0.0


def test_system_efficiency_with_vbg(system):
    de = system_efficiency(system.with_element(vbg_element(0.95)), 0.300)
    assert de == pytest.approx(0.0998, abs=1e-4)


def test_detector_efficiency_bounds(conversion):
    with pytest.raises(ValidationError):
        DetectionSystem(reference_chain(), conversion, 0.0)
    with pytest.raises(ValidationError):
        DetectionSystem(reference_chain(), conversion, 1.5)


def test_efficiency_below_each_factor(system):
    p = np.linspace(0, 1.2, 601)
    de = system_efficiency(system, p)
    assert np.all(de <= min(system.transmission, system.detector_efficiency))


def test_argmax_at_p_peak(system):
    p = np.linspace(0, 1.0, 10001)
    assert p[np.argmax(system_efficiency(system, p))] == pytest.approx(0.300, abs=1e-4)
