"""Narrow peaks and dips on a Doppler profile and their monoenergetic equivalent.

In a Maxwell gas the travelling strong wave burns a structure into the probe
profile whose shape is a monoenergetic line with renormalized widths
Γ0, Γ± and Γ̃n, centred at ±(kμ/k)Ω.  Upper sign: co-propagating waves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import GridNotSymmetric, InvalidModel, NegativeEffectiveWidth
from .lineshape import GainSample, Spectrum, gain_terms
from .model import ProbeGrid, RelaxationSet, g_sq_from_kappa


@dataclass(frozen=True)
class MaxwellParams:
    k_ratio: float
    copropagating: bool = True
    kappa: float = 0.0
    omega: float = 0.0
    population_scale: float = 1.0

    def __post_init__(self) -> None:
        if not self.k_ratio > 1.0:
            raise InvalidModel(f"k_ratio = k_mu/k must exceed 1, got {self.k_ratio!r}")
        if not self.kappa >= 0.0:
            raise InvalidModel(f"kappa must be >= 0, got {self.kappa!r}")
        if not self.copropagating and self.kappa == 0.0:
            raise InvalidModel("counter-propagating waves need kappa > 0 (effective Gamma_n vanishes)")

    @property
    def sign(self) -> int:
        return 1 if self.copropagating else -1


@dataclass(frozen=True)
class EffectiveBeam:
    """Monoenergetic-beam parameters reproducing the Doppler-gas structure.

    ``gamma_n_eff`` keeps its sign: for counter-propagating waves it is
    negative and only enters as a weight, never as a width.  The mapping
    also implies Ω′ = 0 and |N_m − N_n| ≫ |N_g − N_n|.
    """

    gamma_gn_eff: float
    gamma_gm_eff: float
    gamma_n_eff: float
    center_shift: float


def effective_widths(m: RelaxationSet, p: MaxwellParams) -> EffectiveBeam:
    root = math.sqrt(1.0 + p.kappa)
    s = p.sign
    gamma0 = m.gamma_gn + p.k_ratio * m.gamma * root
    gamma_pm = m.gamma_gm + (1.0 - s * p.k_ratio) * m.gamma * root
    if gamma_pm <= 0.0:
        raise NegativeEffectiveWidth(
            f"Gamma_+ = {gamma_pm:.6g} <= 0 (gamma_gm too small for k_ratio={p.k_ratio}, kappa={p.kappa})"
        )
    gamma_n_eff = m.gamma_n * (1.0 + s * root)
    return EffectiveBeam(gamma0, gamma_pm, gamma_n_eff, s * p.k_ratio * p.omega)


def prefactor(p: MaxwellParams) -> float:
    """(kμ/k)(1 ± sqrt(1 + κ))/sqrt(1 + κ); positive for peaks, negative for dips."""
    root = math.sqrt(1.0 + p.kappa)
    return p.k_ratio * (1.0 + p.sign * root) / root


def _profile_per_g_sq(m: RelaxationSet, p: MaxwellParams, omega_mu) -> np.ndarray:
    beam = effective_widths(m, p)
    g_sq = g_sq_from_kappa(m, p.kappa)
    delta = np.asarray(omega_mu, dtype=float) - beam.center_shift
    raman = beam.gamma_gm_eff + 1j * delta
    den = beam.gamma_gn_eff + 1j * delta + g_sq / raman
    weight = (1.0 - m.gamma_mn_branch / m.gamma_m) * 2.0 / beam.gamma_n_eff + 1.0 / raman
    return prefactor(p) * np.real(np.asarray(p.population_scale * weight / den))


def maxwell_peak_profile(m: RelaxationSet, p: MaxwellParams, omega_mu):
    """Doppler-gas peak/dip profile at probe detuning(s) ``omega_mu``."""
    value = g_sq_from_kappa(m, p.kappa) * _profile_per_g_sq(m, p, omega_mu)
    return float(value) if value.ndim == 0 else value


def monoenergetic_equivalent(m: RelaxationSet, p: MaxwellParams, omega_mu,
                             remap_gamma_n: bool = True):
    """x-proportional part of the monoenergetic gain on the effective beam.

    Evaluated in the shifted coordinate with Ω′ = 0.  The field-free 1 in the
    square bracket is dropped, which is the |N_m − N_n| ≫ |N_g − N_n| limit
    taken exactly.  The overall scale is arbitrary.
    """
    beam = effective_widths(m, p)
    g_sq = g_sq_from_kappa(m, p.kappa)
    gamma_n = beam.gamma_n_eff if remap_gamma_n else m.gamma_n
    c_pop = (1.0 - m.gamma_mn_branch / m.gamma_m) * 2.0 * m.gamma / gamma_n
    _, pop, inter = gain_terms(beam.gamma_gn_eff, beam.gamma_gm_eff, m.gamma, c_pop, g_sq, 0.0,
                               -1.0, np.asarray(omega_mu, dtype=float), True)
    return np.real(pop + inter)


def _scaled_deviation(reference: np.ndarray, candidate: np.ndarray) -> float:
    denom = float(np.dot(candidate, candidate))
    scale = float(np.dot(reference, candidate)) / denom if denom > 0 else 0.0
    peak = float(np.max(np.abs(reference)))
    return float(np.max(np.abs(scale * candidate - reference))) / peak


def shape_equivalence_check(m: RelaxationSet, p: MaxwellParams, grid=None, *,
                            remap_gamma_n: bool = True, points: int = 201) -> float:
    """Max deviation between the Doppler profile and the effective-beam line.

    The Doppler profile is least-squares scaled onto the monoenergetic line
    (the scale absorbs N_m − N_n) and the worst residual is returned relative
    to the line's peak.  ``grid`` holds offsets from the centre shift; by
    default ±10 effective widths.
    """
    beam = effective_widths(m, p)
    if grid is None:
        span = 10.0 * max(beam.gamma_gn_eff, beam.gamma_gm_eff)
        offsets = np.linspace(-span, span, points)
    else:
        offsets = grid.points if isinstance(grid, ProbeGrid) else np.asarray(grid, dtype=float)
    # the explicit |G|^2 factor is divided out so that kappa = 0 keeps a shape
    doppler = _profile_per_g_sq(m, p, offsets + beam.center_shift)
    mono = monoenergetic_equivalent(m, p, offsets, remap_gamma_n=remap_gamma_n)
    return _scaled_deviation(mono, np.atleast_1d(doppler))


SpectrumLike = Union[Spectrum, Iterable[GainSample], tuple]


def _columns(spectrum: SpectrumLike):
    if isinstance(spectrum, Spectrum):
        return spectrum.omega_mu, spectrum.total
    if isinstance(spectrum, tuple) and len(spectrum) == 2:
        return np.asarray(spectrum[0], dtype=float), np.asarray(spectrum[1], dtype=float)
    rows = list(spectrum)
    return np.array([r.omega_mu for r in rows]), np.array([r.total for r in rows])


def asymmetry_metric(spectrum: SpectrumLike, center: float, atol: float = 1e-9) -> float:
    """max|s(c + δ) − s(c − δ)| / max|s| on a grid symmetric about ``center``.

    Accepts a :class:`Spectrum`, GainSample rows or an ``(omega, values)`` pair.
    """
    w, s = _columns(spectrum)
    offsets = w - center
    mirrored = -offsets[::-1]
    scale = max(float(np.max(np.abs(offsets))), 1.0)
    if not np.allclose(offsets, mirrored, rtol=0.0, atol=atol * scale):
        raise GridNotSymmetric(f"grid is not symmetric about {center!r}")
    peak = float(np.max(np.abs(s)))
    if peak == 0.0:
        return 0.0
    return float(np.max(np.abs(s - s[::-1]))) / peak


def best_center_asymmetry(f, centers, half_span: float, points: int = 401):
    """Smallest asymmetry of ``f`` over candidate centres, each with its own symmetric grid.

    Returns ``(metric, center)``.
    """
    best = (math.inf, math.nan)
    offsets = np.linspace(-half_span, half_span, points)
    for c in centers:
        w = c + offsets
        value = asymmetry_metric((w, np.asarray(f(w), dtype=float)), c)
        if value < best[0]:
            best = (value, float(c))
    return best
