"""Amplification band, gain half-width and optimum saturation.

These formulas describe the line when the nonlinear interference term
dominates the numerator of the gain, which is what lets the probe be
amplified even when n_g − ρ_nn < 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Tuple

import numpy as np

from .errors import AmbiguousRegime, NoRealBand, OutsideValidity
from .lineshape import alpha_ratio
from .model import (
    DriveField,
    RelaxationSet,
    check_ratio,
    g_sq_from_kappa,
    population_factor,
    saturation_denominator,
    tau_squared,
)
from .oracle import Extremum, extremize_over

DOMINANCE_THRESHOLD = 10.0
KAPPA_MAX = 1e3


@dataclass(frozen=True)
class RegimeReport:
    ratio_interference_vs_population: float
    ratio_interference_strength: float
    dominant: Literal["splitting", "population", "interference", "mixed"]
    threshold: float = DOMINANCE_THRESHOLD

    @property
    def regime_valid(self) -> bool:
        return self.dominant == "interference"


@dataclass(frozen=True)
class BandReport:
    edge_low: float
    edge_high: float
    regime: Optional[RegimeReport] = None

    @property
    def width(self) -> float:
        return self.edge_high - self.edge_low

    @property
    def regime_valid(self) -> bool:
        return self.regime is not None and self.regime.regime_valid


def regime_classify(m: RelaxationSet, d: DriveField, x: float,
                    threshold: float = DOMINANCE_THRESHOLD, x_atol: float = 1e-12) -> RegimeReport:
    """Evaluate which strong-field effect governs the gain numerator.

    ratio_interference_vs_population
        (Γ/Γgm) / [(1 − γmn/Γm)·2Γ/Γn]: interference weight over population weight.
    ratio_interference_strength
        (Γ/Γgm)·|G|² x / (Γ²(1 + κ) + Ω²): interference term over the field-free 1.
    """
    x = check_ratio(x)
    c_pop = population_factor(m)
    interference_weight = m.gamma / m.gamma_gm
    r1 = math.inf if c_pop == 0 else interference_weight / c_pop
    r2 = interference_weight * d.g_sq * x / saturation_denominator(m, d)
    if abs(x) <= x_atol:
        dominant = "splitting"
    elif r1 > threshold and r2 > threshold:
        dominant = "interference"
    elif r1 < 1.0 / threshold:
        dominant = "population"
    else:
        dominant = "mixed"
    return RegimeReport(r1, r2, dominant, threshold)


def _band_coefficients(m: RelaxationSet, d: DriveField):
    s = m.gamma_gn + m.gamma + m.gamma_gm
    omega = d.detuning
    disc = (s ** 2 * omega ** 2 - 4.0 * m.gamma_gn * m.gamma * omega ** 2
            + 4.0 * m.gamma ** 2 * (m.gamma_gn * m.gamma_gm + d.g_sq))
    return s * omega, disc


def band_edges(m: RelaxationSet, d: DriveField, x: Optional[float] = None) -> BandReport:
    """Edges of the probe band where the interference term gives net gain (x > 0).

    For Ω = 0 the edges are exactly ±sqrt(Γgn Γgm + |G|²).  Passing ``x``
    attaches the dominance report telling whether the band is meaningful.
    """
    centre, disc = _band_coefficients(m, d)
    if disc < 0:
        raise NoRealBand(f"band discriminant {disc:.3g} < 0")
    if d.detuning == 0:
        half = math.sqrt(m.gamma_gn * m.gamma_gm + d.g_sq)
        lo, hi = -half, half
    else:
        root = math.sqrt(disc)
        lo = (centre - root) / (2.0 * m.gamma)
        hi = (centre + root) / (2.0 * m.gamma)
    regime = None if x is None else regime_classify(m, d, x)
    return BandReport(lo, hi, regime)


def band_limit_ratio(m: RelaxationSet, d: DriveField) -> float:
    """Ω²(Γgn − Γ)² / [4Γ²(Γgn Γgm + |G|²)]: below 1 the drive counts as near resonance."""
    return (d.detuning ** 2 * (m.gamma_gn - m.gamma) ** 2
            / (4.0 * m.gamma ** 2 * (m.gamma_gn * m.gamma_gm + d.g_sq)))


def band_edges_limit(m: RelaxationSet, d: DriveField,
                     which_limit: Literal["near", "far"]) -> Tuple[float, float]:
    """Approximate band edges for Γgm ≪ Γ, Γgn.

    near: ½(1 + Γgn/Γ)Ω ± sqrt(Γgn Γgm + |G|²)
    far:  (Γgn/Γ)Ω and Ω
    """
    ratio = band_limit_ratio(m, d)
    if 0.1 <= ratio <= 10.0:
        raise AmbiguousRegime(f"band limit ratio {ratio:.3g} lies in [0.1, 10]")
    natural = "near" if ratio < 0.1 else "far"
    if which_limit != natural:
        raise AmbiguousRegime(f"requested {which_limit!r} limit but ratio {ratio:.3g} is {natural}")
    omega = d.detuning
    if which_limit == "near":
        centre = 0.5 * (1.0 + m.gamma_gn / m.gamma) * omega
        half = math.sqrt(m.gamma_gn * m.gamma_gm + d.g_sq)
        return centre - half, centre + half
    a, b = m.gamma_gn / m.gamma * omega, omega
    return (a, b) if a <= b else (b, a)


def gain_halfwidth_resonant(m: RelaxationSet, g_sq: float) -> float:
    """Exact half-width at half-height of the Ω = 0 amplification line."""
    s2 = (m.gamma_gn + m.gamma_gm) ** 2
    p = m.gamma_gn * m.gamma_gm + g_sq
    return math.sqrt(0.5 * (math.sqrt(s2 ** 2 + 4.0 * p ** 2) - s2))


def gain_halfwidth_resonant_approx(m: RelaxationSet, g_sq: float) -> float:
    """(Γgn Γgm + |G|²)/(Γgn + Γgm), valid when that over (Γgn + Γgm) is small."""
    return (m.gamma_gn * m.gamma_gm + g_sq) / (m.gamma_gn + m.gamma_gm)


def halfwidth_small_ratio(m: RelaxationSet, g_sq: float) -> float:
    """(Γgn Γgm + |G|²) / (Γgn + Γgm)²."""
    return (m.gamma_gn * m.gamma_gm + g_sq) / (m.gamma_gn + m.gamma_gm) ** 2


def x1_as_printed(m: RelaxationSet) -> float:
    """Threshold ratio x1 exactly as the closed form is typeset.

    The grouping adds Γn·Γm to rates, so the value is unit dependent; it
    only makes sense in units of Γ and is kept for comparison.
    """
    k = m.gamma_m - m.gamma_mn_branch
    return (k + m.gamma_n) / ((k + m.gamma_n * m.gamma_m) / (2.0 * m.gamma_gm))


def x1_reconstructed(m: RelaxationSet) -> float:
    """Threshold ratio x1 re-derived from the line-centre gain.

    (Γm − γmn + Γn) / (Γm − γmn + Γm Γn / (2Γgm)); above it the line-centre
    gain changes sign at finite saturation.
    """
    k = m.gamma_m - m.gamma_mn_branch
    return (k + m.gamma_n) / (k + m.gamma_m * m.gamma_n / (2.0 * m.gamma_gm))


def _kappa_opt_from_x1(m: RelaxationSet, x: float, x1: float) -> float:
    x = check_ratio(x)
    if not x > x1:
        raise OutsideValidity(f"kappa_opt needs x > x1 = {x1:.6g}, got x = {x:.6g}")
    kappa1 = 1.0 / (x / x1 - 1.0)
    inner = (2.0 * tau_squared(m) * m.gamma_gm * m.gamma_gn * x + x1) / (x1 * kappa1)
    return kappa1 * (1.0 + math.sqrt(1.0 + inner))


def kappa_opt_closed(m: RelaxationSet, x: float) -> float:
    """Closed-form optimum saturation with x1 taken as printed (see :func:`x1_as_printed`)."""
    return _kappa_opt_from_x1(m, x, x1_as_printed(m))


def kappa_opt_reconstructed(m: RelaxationSet, x: float) -> float:
    """Same closed form with the re-derived :func:`x1_reconstructed`."""
    return _kappa_opt_from_x1(m, x, x1_reconstructed(m))


def line_centre_gain(m: RelaxationSet, x: float, kappa, omega: float = 0.0):
    """Gain at Ωμ = 0 as a function of saturation κ (vectorized over ``kappa``)."""
    kappa = np.asarray(kappa, dtype=float)
    out = np.array([alpha_ratio(m, DriveField(g_sq_from_kappa(m, k), omega), x, 0.0)
                    for k in kappa.reshape(-1)])
    return out.reshape(kappa.shape) if kappa.ndim else float(out[0])


@dataclass(frozen=True)
class OptimumReport:
    kappa_numeric: float
    value: float
    derivative: float
    kappa_closed: Optional[float]
    kappa_reconstructed: Optional[float]
    evaluations: int

    def discrepancy(self, which: str = "closed") -> Optional[float]:
        other = self.kappa_closed if which == "closed" else self.kappa_reconstructed
        if other is None:
            return None
        return abs(other - self.kappa_numeric) / self.kappa_numeric

    def as_dict(self) -> dict:
        return {
            "kappa_opt_numeric": self.kappa_numeric,
            "alpha_at_optimum": self.value,
            "dalpha_dkappa": self.derivative,
            "kappa_opt_closed_as_printed": self.kappa_closed,
            "discrepancy_closed_as_printed": self.discrepancy("closed"),
            "kappa_opt_reconstructed": self.kappa_reconstructed,
            "discrepancy_reconstructed": self.discrepancy("reconstructed"),
            "evaluations": self.evaluations,
        }


def kappa_opt_numeric(m: RelaxationSet, x: float, omega: float = 0.0, *,
                      kappa_max: float = KAPPA_MAX, rtol: float = 1e-8) -> Extremum:
    """Saturation that maximises |gain| at the probe line centre.

    Scans κ = 2^k up to ``kappa_max`` for an interior local maximum of
    |α(Ωμ = 0)|, then refines it by golden section.  The returned extremum
    carries the signed gain.
    """
    x = check_ratio(x)

    def signed(kappa):
        return alpha_ratio(m, DriveField(g_sq_from_kappa(m, kappa), omega), x, 0.0)

    k_hi = int(math.ceil(math.log2(kappa_max)))
    scan = 2.0 ** np.arange(-20, k_hi + 1)
    return extremize_over(signed, scan, mode="absmax", rtol=rtol)


def central_derivative(f, x0: float, rel_step: float = 1e-4) -> float:
    h = rel_step * max(abs(x0), 1e-12)
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h)


def optimum_report(m: RelaxationSet, x: float, omega: float = 0.0, **kwargs) -> OptimumReport:
    """Numeric optimum with both closed forms alongside (discrepancies reported, not judged)."""
    ext = kappa_opt_numeric(m, x, omega, **kwargs)
    deriv = central_derivative(lambda k: line_centre_gain(m, x, k, omega), ext.location)

    def maybe(fn):
        try:
            return fn(m, x)
        except OutsideValidity:
            return None

    return OptimumReport(ext.location, ext.value, deriv, maybe(kappa_opt_closed),
                         maybe(kappa_opt_reconstructed), ext.evaluations)


__all__ = [
    "BandReport", "RegimeReport", "OptimumReport", "band_edges", "band_edges_limit",
    "band_limit_ratio", "gain_halfwidth_resonant", "gain_halfwidth_resonant_approx",
    "halfwidth_small_ratio", "kappa_opt_closed", "kappa_opt_reconstructed", "kappa_opt_numeric",
    "line_centre_gain", "optimum_report", "regime_classify", "x1_as_printed", "x1_reconstructed",
]
