import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from probeline.lineshape import (
    ContributionToggles,
    alpha_complex,
    alpha_ratio,
    bare_lorentzian,
    contributions,
    population_difference_gn,
    population_difference_mn,
    spectrum,
)
from probeline.model import DriveField, ProbeGrid, RelaxationSet, g_sq_from_kappa
from probeline.oracle import extremize_over, integrate_spectrum
from probeline.spectral_analysis import component_summary

from conftest import drives, relaxation_sets


def test_bare_line_values(unit_model):
    d = DriveField(0.0)
    assert alpha_ratio(unit_model, d, 3.0, 0.0) == 1.0
    assert alpha_ratio(unit_model, d, 3.0, 1.0) == pytest.approx(0.5, rel=1e-15)


def test_strong_field_component_near_g(unit_model):
    # |G| = 10: components at +-10 with half-width 1 and about half the bare height
    d = DriveField(100.0)
    grid = np.linspace(9.5, 10.5, 201)
    ext = extremize_over(lambda w: alpha_ratio(unit_model, d, 0.0, w), grid)
    assert abs(ext.location - 10.0) < 0.1
    assert ext.value == pytest.approx(0.5, abs=0.02)


@given(relaxation_sets(), st.floats(-50, 50), st.floats(-5, 5))
def test_zero_field_is_lorentzian(m, w, x):
    got = alpha_ratio(m, DriveField(0.0, 3.0), x, w)
    assert abs(got - bare_lorentzian(m.gamma_gn, w)) < 1e-14


def test_population_difference_examples(unit_model):
    d = DriveField(0.5)
    assert population_difference_mn(unit_model, DriveField(0.0)) == 1.0
    assert population_difference_mn(unit_model, d) == pytest.approx(1 / 3, rel=1e-15)
    assert population_difference_mn(unit_model, DriveField(0.5, 1e6)) == pytest.approx(1.0, abs=1e-10)
    assert population_difference_gn(unit_model, DriveField(0.0), 2.0) == 1.0
    assert population_difference_gn(unit_model, d, 1.0) == pytest.approx(2 / 3, rel=1e-15)


@given(relaxation_sets(), st.floats(0, 1e3), st.floats(0, 1e3), st.floats(-20, 20))
def test_population_difference_bounded_and_monotone(m, g1, g2, om):
    lo, hi = sorted((g1, g2))
    a = population_difference_mn(m, DriveField(lo, om))
    b = population_difference_mn(m, DriveField(hi, om))
    assert 0 < b <= a <= 1


@given(relaxation_sets(), drives(), st.floats(-5, 5), st.floats(-30, 30))
def test_detuning_mirror_symmetry(m, d, x, w):
    a = alpha_ratio(m, d, x, w)
    b = alpha_ratio(m, DriveField(d.g_sq, -d.detuning), x, -w)
    assert abs(a - b) <= 1e-14 * max(1.0, abs(a))
    z1 = alpha_complex(m, d, x, w)
    z2 = alpha_complex(m, DriveField(d.g_sq, -d.detuning), x, -w)
    assert abs(z1 - np.conj(z2)) <= 1e-14 * max(1.0, abs(z1))


@given(relaxation_sets(), drives(), st.floats(-5, 5), st.floats(-30, 30))
def test_all_toggles_on_equals_alpha(m, d, x, w):
    s = contributions(m, d, x, w)
    assert s.total == alpha_ratio(m, d, x, w)


@given(relaxation_sets(), drives(), st.floats(-5, 5), st.floats(-30, 30))
def test_all_toggles_off_is_bare_line(m, d, x, w):
    s = contributions(m, d, x, w, ContributionToggles.none())
    assert s.total == pytest.approx(bare_lorentzian(m.gamma_gn, w), rel=1e-14)


@given(relaxation_sets(), drives(), st.floats(-30, 30))
def test_x_zero_keeps_only_splitting(m, d, w):
    on = contributions(m, d, 0.0, w)
    split = contributions(m, d, 0.0, w, ContributionToggles(True, False, False))
    assert on.total == split.total == on.splitting_only
    assert on.population_part == 0.0 and on.interference_part == 0.0


def test_interference_dominates_in_regime():
    m = RelaxationSet(1.0, 1e-3, 1.0, 1.0, 200.0)  # Gamma/Gamma_gm = 1e3, c_pop = 1e-2
    d = DriveField(1.0)
    full = contributions(m, d, 50.0, 0.0)
    only = contributions(m, d, 50.0, 0.0, ContributionToggles(True, False, True))
    assert abs(only.total - full.total) / abs(full.total) < 1e-2


def test_spectrum_matches_pointwise(unit_model):
    d = DriveField(2.0, 0.7)
    grid = ProbeGrid.linspace(-10, 10, 41)
    s = spectrum(unit_model, d, 1.5, grid)
    assert len(s) == 41
    for row in s:
        ref = contributions(unit_model, d, 1.5, row.omega_mu)
        for name in ("total", "splitting_only", "population_part", "interference_part"):
            assert getattr(row, name) == pytest.approx(getattr(ref, name), rel=1e-14, abs=1e-16)


def test_single_point_spectrum(unit_model):
    d = DriveField(2.0, 0.7)
    s = spectrum(unit_model, d, 1.0, [0.3])
    assert s[0].total == alpha_ratio(unit_model, d, 1.0, 0.3)


def test_symmetric_profile_for_balanced_widths():
    m = RelaxationSet(1.3, 1.3, 0.7, 1.0, 2.0)
    w = np.linspace(-20, 20, 401)
    s = spectrum(m, DriveField(5.0), 0.0, w)
    np.testing.assert_allclose(s.total, s.total[::-1], rtol=0, atol=1e-15)


def test_large_grid(unit_model):
    s = spectrum(unit_model, DriveField(4.0, 1.0), 2.0, np.linspace(-50, 50, 2001))
    assert np.all(np.isfinite(s.total))


@pytest.mark.parametrize("g_sq", [0.0, 1.0, 10.0, 100.0])
@pytest.mark.parametrize("omega", [0.0, 5.0])
def test_integral_independent_of_field(g_sq, omega):
    m = RelaxationSet(1.0, 0.5, 1.0, 1.3, 0.7, 0.2)
    d = DriveField(g_sq, omega)
    scale = max(m.gamma_gn, m.gamma_gm, abs(omega), d.g_abs)
    r = integrate_spectrum(lambda w: alpha_ratio(m, d, 0.0, w), 200 * scale, 1e-8,
                           breakpoints=component_summary(m, d).centers)
    assert r.value == pytest.approx(np.pi * m.gamma_gn, rel=1e-6)


def test_kappa_parameterised_target_values():
    m = RelaxationSet(1, 1, 1, 1, 1)
    assert g_sq_from_kappa(m, 8.0) == pytest.approx(2.0)
