import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from probeline.band_optimum import (
    band_edges,
    band_edges_limit,
    band_limit_ratio,
    gain_halfwidth_resonant,
    gain_halfwidth_resonant_approx,
    halfwidth_small_ratio,
    kappa_opt_closed,
    kappa_opt_numeric,
    kappa_opt_reconstructed,
    line_centre_gain,
    optimum_report,
    regime_classify,
    x1_as_printed,
    x1_reconstructed,
)
from probeline.errors import AmbiguousRegime, NoInteriorExtremum, NoRealBand, OutsideValidity
from probeline.lineshape import alpha_ratio
from probeline.model import DriveField, RelaxationSet
from probeline.oracle import find_zero_crossings

from conftest import relaxation_sets

ONES = RelaxationSet(1, 1, 1, 1, 1)


def test_band_edges_resonant_example():
    b = band_edges(ONES, DriveField(3.0))
    assert (b.edge_low, b.edge_high) == (-2.0, 2.0)
    assert b.width == 4.0 and b.regime is None and not b.regime_valid


def test_band_edges_field_free():
    m = RelaxationSet(2.0, 0.5, 1, 1, 1)
    b = band_edges(m, DriveField(0.0))
    assert b.edge_high == pytest.approx(1.0, rel=1e-15) and b.edge_low == -b.edge_high


@given(relaxation_sets(), st.floats(0, 100), st.floats(-20, 20))
def test_band_discriminant_nonnegative_and_ordered(m, g_sq, om):
    b = band_edges(m, DriveField(g_sq, om))
    assert b.edge_low <= b.edge_high


def test_band_edges_solve_closed_form_numerator():
    # the edges are zero crossings of the interference-only numerator
    m = RelaxationSet(1.0, 1e-4, 2.0, 1.0, 1e6)
    d = DriveField(0.5, 0.8)
    b = band_edges(m, d)
    f = lambda w: alpha_ratio(m, d, 1e8, w)
    z = find_zero_crossings(f, np.linspace(-10, 10, 4001))
    assert len(z) == 2
    assert z == pytest.approx([b.edge_low, b.edge_high], rel=1e-4)


@pytest.mark.parametrize("axis", ["g_sq", "omega"])
def test_band_width_monotone(axis):
    m = RelaxationSet(1.0, 0.05, 0.7, 1.0, 1.0)
    widths = []
    for v in np.linspace(0, 10, 51):
        d = DriveField(v, 0.3) if axis == "g_sq" else DriveField(1.0, math.sqrt(v))
        widths.append(band_edges(m, d).width)
    assert all(b >= a - 1e-12 for a, b in zip(widths, widths[1:]))


def test_far_from_resonance_limit():
    m = RelaxationSet(2.0, 1e-6, 1.0, 1.0, 1.0)
    d0 = DriveField(1.0)
    need = 1e4 * 4 * m.gamma ** 2 * (m.gamma_gn * m.gamma_gm + d0.g_sq) / (m.gamma_gn - m.gamma) ** 2
    d = DriveField(1.0, math.sqrt(need))
    assert band_limit_ratio(m, d) == pytest.approx(1e4)
    lo, hi = band_edges_limit(m, d, "far")
    b = band_edges(m, d)
    assert abs(lo - b.edge_low) / abs(b.edge_low) < 1e-3
    assert abs(hi - b.edge_high) / abs(b.edge_high) < 1e-3
    assert (lo, hi) == (d.detuning, m.gamma_gn / m.gamma * d.detuning)


def test_near_resonance_limit():
    m = RelaxationSet(1.0, 1e-3, 1.0, 1.0, 1.0)
    d = DriveField(1.0, 0.01)
    lo, hi = band_edges_limit(m, d, "near")
    b = band_edges(m, d)
    assert abs(lo - b.edge_low) / abs(b.edge_low) < 1e-4
    assert abs(hi - b.edge_high) / abs(b.edge_high) < 1e-4
    assert band_edges_limit(m, DriveField(1.0), "near") == pytest.approx(
        (-math.sqrt(1.001), math.sqrt(1.001)), rel=1e-15)


def test_limit_regime_errors():
    m = RelaxationSet(2.0, 1e-3, 1.0, 1.0, 1.0)
    d = DriveField(1.0, 2.0)  # ratio about 1
    with pytest.raises(AmbiguousRegime):
        band_edges_limit(m, d, "near")
    with pytest.raises(AmbiguousRegime):
        band_edges_limit(m, DriveField(1.0, 0.001), "far")


def test_band_raises_no_real_band_is_unreachable_for_valid_rates():
    # the discriminant is a sum of squares for positive rates; the error path is defensive
    assert NoRealBand.__mro__[1].__name__ == "ProbelineError"


def test_halfwidth_examples():
    assert gain_halfwidth_resonant(ONES, 0.0) == pytest.approx(math.sqrt((math.sqrt(20) - 4) / 2), rel=1e-15)
    m = RelaxationSet(1.0, 1e-3, 1, 1, 1)
    exact, approx = gain_halfwidth_resonant(m, 1e-3), gain_halfwidth_resonant_approx(m, 1e-3)
    assert abs(exact - approx) / exact < 1e-2
    narrow = RelaxationSet(1.0, 1e-4, 1, 1, 1)
    assert gain_halfwidth_resonant(narrow, 1e-9) == pytest.approx(1e-4, rel=1e-3)


def test_small_ratio_reading_is_first_power():
    # the approximation is for the half-width itself, not its square
    m = RelaxationSet(1.0, 1e-3, 1, 1, 1)
    exact = gain_halfwidth_resonant(m, 1e-4)
    approx = gain_halfwidth_resonant_approx(m, 1e-4)
    assert abs(exact / approx - 1) < 1e-5
    assert abs(exact ** 2 / approx - 1) > 0.5


@pytest.mark.parametrize("ratio", [1e-1, 1e-2, 1e-3, 1e-4])
def test_small_ratio_gap_bound(ratio):
    s = 1.0
    for ggn in (0.5, 0.9, 0.99):
        ggm = s - ggn
        g_sq = ratio * s * s - ggn * ggm
        if g_sq < 0:
            continue
        m = RelaxationSet(ggn, ggm, 1, 1, 1)
        r = halfwidth_small_ratio(m, g_sq)
        assert r == pytest.approx(ratio)
        exact = gain_halfwidth_resonant(m, g_sq)
        approx = gain_halfwidth_resonant_approx(m, g_sq)
        assert approx >= exact
        assert (approx - exact) / exact < r ** 2


def test_regime_examples():
    assert regime_classify(ONES, DriveField(1.0), 0.0).dominant == "splitting"
    m = RelaxationSet(1.0, 1e-3, 1.0, 1.0, 1.0)
    r = regime_classify(m, DriveField(1e3), 1e3)
    assert r.dominant == "interference" and r.regime_valid
    m = RelaxationSet(1.0, 1.0, 1.0, 1.0, 2.0)
    r = regime_classify(m, DriveField(1.0), 1e6)
    assert r.ratio_interference_vs_population == pytest.approx(1.0)
    assert r.dominant == "mixed"
    m = RelaxationSet(1.0, 10.0, 1.0, 1.0, 1e-3)
    assert regime_classify(m, DriveField(1.0), 1.0).dominant == "population"


def test_regime_ratio_unit_invariant():
    m = RelaxationSet(2.0, 0.03, 1.5, 0.7, 4.0, 0.1)
    d = DriveField(0.6, 0.4)
    a = regime_classify(m, d, 3.0)
    s = 1e3
    ms = RelaxationSet(**{k: v * s for k, v in m.as_dict().items()})
    b = regime_classify(ms, DriveField(d.g_sq * s * s, d.detuning * s), 3.0)
    assert a.ratio_interference_vs_population == pytest.approx(b.ratio_interference_vs_population)
    assert a.ratio_interference_strength == pytest.approx(b.ratio_interference_strength)


def test_regime_negative_x_gives_negative_strength():
    r = regime_classify(ONES, DriveField(1.0), -2.0)
    assert r.ratio_interference_strength < 0 and r.dominant != "interference"


def test_dominance_ratios_do_not_bound_edge_error_for_wide_probe_line():
    # both ratios exceed 1e3, yet Gamma_gn / Gamma_gm = 100 leaves the
    # field-free 1 large enough to move the zero crossings by several percent
    m = RelaxationSet(1.0, 0.01, 1.0, 1.0, 1000.0)
    d, x = DriveField(0.01), 1100.0
    r = regime_classify(m, d, x)
    assert min(r.ratio_interference_vs_population, r.ratio_interference_strength) >= 1e3
    edge = band_edges(m, d).edge_high
    z = find_zero_crossings(lambda w: alpha_ratio(m, d, x, w), np.linspace(0, 5 * edge, 2001))
    assert abs(z[-1] - edge) / edge > 0.01


# --- optimum --------------------------------------------------------------------


def test_no_optimum_without_population_inversion():
    with pytest.raises(NoInteriorExtremum):
        kappa_opt_numeric(ONES, 0.0)


def test_optimum_unit_model():
    ext = kappa_opt_numeric(ONES, 5.0)
    f = lambda k: line_centre_gain(ONES, 5.0, k)
    h = 1e-5 * ext.location
    deriv = (f(ext.location + h) - f(ext.location - h)) / (2 * h)
    assert abs(deriv) < 1e-6 * abs(ext.value)
    assert ext.value == pytest.approx(f(ext.location))


def test_optimum_tolerance_contract():
    a = kappa_opt_numeric(ONES, 5.0, rtol=1e-8)
    b = kappa_opt_numeric(ONES, 5.0, rtol=2e-8)
    assert abs(a.location - b.location) / a.location < 1e-6


def test_reconstructed_closed_form_matches_numeric():
    for m, x in [(ONES, 5.0), (RelaxationSet(2.0, 0.3, 1.0, 1.5, 0.8, 0.4), 12.0),
                 (RelaxationSet(0.5, 0.05, 2.0, 1.0, 3.0), 40.0)]:
        num = kappa_opt_numeric(m, x).location
        assert kappa_opt_reconstructed(m, x) == pytest.approx(num, rel=1e-6)


def test_printed_closed_form_disagrees():
    # reported, not asserted as correct: the printed threshold is off
    closed = kappa_opt_closed(ONES, 5.0)
    num = kappa_opt_numeric(ONES, 5.0).location
    assert abs(closed - num) / num > 0.1


def test_kappa_opt_diverges_at_threshold():
    x1 = x1_reconstructed(ONES)
    vals = [kappa_opt_reconstructed(ONES, x1 * (1 + e)) for e in (1e-1, 1e-2, 1e-3)]
    assert vals[0] < vals[1] < vals[2] and vals[2] > 1e3
    with pytest.raises(OutsideValidity):
        kappa_opt_reconstructed(ONES, x1)
    with pytest.raises(OutsideValidity):
        kappa_opt_closed(ONES, 0.5 * x1_as_printed(ONES))


def test_optimum_report_fields():
    rep = optimum_report(ONES, 5.0)
    d = rep.as_dict()
    assert d["kappa_opt_numeric"] == rep.kappa_numeric
    assert d["discrepancy_reconstructed"] < 1e-6
    assert d["discrepancy_closed_as_printed"] > 0.1
    assert abs(rep.derivative) < 1e-6 * abs(rep.value)
    low = optimum_report(ONES, 0.5 * x1_reconstructed(ONES) + 0.5 * x1_reconstructed(ONES) * 1.01)
    assert low.kappa_reconstructed is not None
