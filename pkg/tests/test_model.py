import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from probeline.errors import InvalidModel
from probeline.model import (
    DriveField,
    ProbeGrid,
    RelaxationSet,
    g_sq_from_kappa,
    population_factor,
    saturation_kappa,
    tau_squared,
    validate,
)

from conftest import relaxation_sets


def test_unit_rates_are_valid(unit_model):
    assert validate(unit_model) is unit_model


def test_branch_above_width_rejected():
    with pytest.raises(InvalidModel, match="gamma_mn_branch"):
        RelaxationSet(1, 1, 1, gamma_m=1.0, gamma_n=1, gamma_mn_branch=2.0)


@pytest.mark.parametrize("name", ["gamma_gn", "gamma_gm", "gamma", "gamma_m", "gamma_n"])
@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_nonpositive_rates_rejected(name, bad):
    values = dict(gamma_gn=1, gamma_gm=1, gamma=1, gamma_m=1, gamma_n=1)
    values[name] = bad
    with pytest.raises(InvalidModel, match=name):
        validate(values)


def test_validate_mapping_unknown_key():
    with pytest.raises(InvalidModel, match="unknown"):
        validate(dict(gamma_gn=1, gamma_gm=1, gamma=1, gamma_m=1, gamma_n=1, gamma_nm=0.1))


def test_validate_mapping_missing_key():
    with pytest.raises(InvalidModel):
        validate(dict(gamma_gn=1, gamma_gm=1))


def test_invalid_model_is_value_error():
    with pytest.raises(ValueError):
        RelaxationSet(1, 1, 0, 1, 1)


@pytest.mark.parametrize("gm, gn, g, br, expected", [
    (1, 1, 1, 0, 2.0),
    (2, 1, 1, 2, 0.5),
    (1, 1, 1, 1, 1.0),
])
def test_tau_squared(gm, gn, g, br, expected):
    m = RelaxationSet(1, 1, g, gm, gn, br)
    assert tau_squared(m) == pytest.approx(expected, rel=1e-15)


def test_kappa_examples(unit_model):
    assert saturation_kappa(unit_model, 0.5) == pytest.approx(2.0)
    assert saturation_kappa(unit_model, 2.0) == pytest.approx(8.0)
    assert saturation_kappa(unit_model, 0.0) == 0.0
    assert g_sq_from_kappa(unit_model, 2.0) == pytest.approx(0.5)
    assert g_sq_from_kappa(unit_model, 0.0) == 0.0


@given(relaxation_sets(), st.floats(0.0, 1e4), st.floats(0.0, 1e3))
def test_kappa_linear_and_invertible(m, g_sq, a):
    k = saturation_kappa(m, g_sq)
    assert saturation_kappa(m, a * g_sq) == pytest.approx(a * k, rel=1e-14, abs=1e-300)
    if k > 0:
        assert g_sq_from_kappa(m, k) == pytest.approx(g_sq, rel=1e-14)


@given(relaxation_sets(), st.floats(0.0, 1e6))
def test_kappa_roundtrip_from_kappa(m, kappa):
    assert saturation_kappa(m, g_sq_from_kappa(m, kappa)) == pytest.approx(kappa, rel=1e-14, abs=0)


def test_kappa_vectorized(unit_model):
    k = np.array([0.0, 2.0, 8.0])
    np.testing.assert_allclose(g_sq_from_kappa(unit_model, k), [0.0, 0.5, 2.0])
    with pytest.raises(InvalidModel):
        g_sq_from_kappa(unit_model, np.array([1.0, -1.0]))


def test_negative_kappa_rejected(unit_model):
    with pytest.raises(InvalidModel):
        g_sq_from_kappa(unit_model, -0.1)


def test_drive_field_checks(unit_model):
    with pytest.raises(InvalidModel):
        DriveField(-1.0)
    with pytest.raises(InvalidModel):
        DriveField(1.0, math.inf)
    d = DriveField.from_kappa(unit_model, 2.0, 0.3)
    assert d.g_sq == pytest.approx(0.5) and d.detuning == 0.3
    assert DriveField(4.0).g_abs == 2.0


def test_probe_grid():
    g = ProbeGrid.linspace(-1, 1, 5)
    assert len(g) == 5
    with pytest.raises(InvalidModel):
        ProbeGrid([0.0, 0.0])
    with pytest.raises(InvalidModel):
        ProbeGrid([])
    with pytest.raises(InvalidModel):
        ProbeGrid.linspace(1, 1, 3)
    with pytest.raises(ValueError):
        g.points[0] = 3.0  # read-only


def test_population_factor(unit_model):
    assert population_factor(unit_model) == pytest.approx(2.0)
    assert population_factor(unit_model.replace(gamma_mn_branch=1.0)) == 0.0


def test_models_are_hashable_values(unit_model):
    assert {unit_model: 1}[RelaxationSet(1, 1, 1, 1, 1)] == 1
    assert unit_model.as_dict()["gamma"] == 1.0
