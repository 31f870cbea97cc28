"""Normalized weak-probe gain α_μ/α_μ⁰ for monoenergetic atoms.

The closed form is::

    Re{ Γgn / [Γgn + iΩμ + |G|² / (Γgm + i(Ωμ − Ω))]
        · [1 − |G|² x / (Γ²(1 + κ) + Ω²) · (c_pop + (Γ + iΩ) / (Γgm + i(Ωμ − Ω)))] }

with c_pop = (1 − γmn/Γm)·2Γ/Γn.  The three field effects (level splitting in
the denominator, the population change ``c_pop`` and the nonlinear
interference term) can be switched off separately.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .model import (
    DriveField,
    ProbeGrid,
    RelaxationSet,
    check_ratio,
    population_factor,
    saturation_denominator,
)


@dataclass(frozen=True)
class ContributionToggles:
    include_splitting: bool = True
    include_population: bool = True
    include_interference: bool = True

    @classmethod
    def none(cls) -> "ContributionToggles":
        return cls(False, False, False)


ALL_ON = ContributionToggles()


@dataclass(frozen=True)
class GainSample:
    omega_mu: float
    total: float
    splitting_only: float
    population_part: float
    interference_part: float


@dataclass(frozen=True)
class Spectrum:
    """Column view of a computed spectrum; iterates as :class:`GainSample` rows."""

    omega_mu: np.ndarray
    total: np.ndarray
    splitting_only: np.ndarray
    population_part: np.ndarray
    interference_part: np.ndarray

    def __len__(self) -> int:
        return self.omega_mu.size

    def __getitem__(self, i: int) -> GainSample:
        return GainSample(
            float(self.omega_mu[i]),
            float(self.total[i]),
            float(self.splitting_only[i]),
            float(self.population_part[i]),
            float(self.interference_part[i]),
        )

    def __iter__(self) -> Iterator[GainSample]:
        return (self[i] for i in range(len(self)))


def gain_terms(gamma_gn, gamma_gm, gamma, c_pop, g_sq, omega, amplitude, omega_mu,
               splitting=True):
    """Complex building blocks of the gain on raw (unchecked) parameters.

    Returns ``(lead, population, interference)`` such that the full complex
    gain is ``lead + population + interference``.  ``amplitude`` is the
    x-proportional prefactor |G|^2 x / (Gamma^2 (1 + kappa) + Omega^2).
    Used directly by the Doppler-gas mapping, where an effective width may
    be negative and would not pass :class:`RelaxationSet` validation.
    """
    omega_mu = np.asarray(omega_mu, dtype=float)
    raman = gamma_gm + 1j * (omega_mu - omega)
    den = gamma_gn + 1j * omega_mu
    if splitting:
        den = den + g_sq / raman
    lead = gamma_gn / den
    population = -lead * amplitude * c_pop
    interference = -lead * amplitude * (gamma + 1j * omega) / raman
    return lead, population, interference


def _terms(m: RelaxationSet, d: DriveField, x: float, omega_mu, splitting: bool):
    x = check_ratio(x)
    amplitude = d.g_sq * x / saturation_denominator(m, d)
    return gain_terms(
        m.gamma_gn, m.gamma_gm, m.gamma, population_factor(m),
        d.g_sq, d.detuning, amplitude, omega_mu, splitting,
    )


def alpha_complex(m: RelaxationSet, d: DriveField, x: float, omega_mu):
    """Complex gain before the real part is taken (broadcasts over ``omega_mu``)."""
    lead, population, interference = _terms(m, d, x, omega_mu, True)
    return lead + population + interference


def alpha_ratio(m: RelaxationSet, d: DriveField, x: float, omega_mu):
    """Normalized gain alpha_mu / alpha_mu^0 at probe detuning(s) ``omega_mu``.

    Positive values reproduce the field-free line (scaled to 1 at its centre);
    the physical sign of amplification follows the sign of Delta n_gn.
    """
    value = np.real(alpha_complex(m, d, x, omega_mu))
    return float(value) if value.ndim == 0 else value


def population_difference_mn(m: RelaxationSet, d: DriveField) -> float:
    """(rho_mm - rho_nn) / Delta n_mn = (Gamma^2 + Omega^2) / (Gamma^2 (1 + kappa) + Omega^2)."""
    return (m.gamma ** 2 + d.detuning ** 2) / saturation_denominator(m, d)


def population_difference_gn(m: RelaxationSet, d: DriveField, x: float) -> float:
    """(n_g - rho_nn) / Delta n_gn; may be negative once the drive pumps level n."""
    x = check_ratio(x)
    return 1.0 - x * population_factor(m) * d.g_sq / saturation_denominator(m, d)


def _columns(m, d, x, omega_mu, toggles: ContributionToggles):
    lead, population, interference = _terms(m, d, x, omega_mu, toggles.include_splitting)
    value = lead
    if toggles.include_population:
        value = value + population
    if toggles.include_interference:
        value = value + interference
    return np.real(value), np.real(lead), np.real(population), np.real(interference)


def contributions(m: RelaxationSet, d: DriveField, x: float, omega_mu: float,
                  toggles: ContributionToggles = ALL_ON) -> GainSample:
    """Gain at one probe detuning together with its per-effect breakdown.

    ``splitting_only`` replaces the square bracket by 1; ``population_part``
    and ``interference_part`` are the two x-proportional terms, each still
    carrying the (possibly split) common denominator.  ``total`` keeps only
    the terms enabled in ``toggles``.
    """
    total, split, pop, inter = _columns(m, d, x, float(omega_mu), toggles)
    return GainSample(float(omega_mu), float(total), float(split), float(pop), float(inter))


def spectrum(m: RelaxationSet, d: DriveField, x: float, grid,
             toggles: ContributionToggles = ALL_ON) -> Spectrum:
    """Vectorized :func:`contributions` over a probe grid."""
    if not isinstance(grid, ProbeGrid):
        grid = ProbeGrid(grid)
    pts = grid.points
    total, split, pop, inter = _columns(m, d, x, pts, toggles)
    return Spectrum(pts.copy(), np.atleast_1d(total), np.atleast_1d(split),
                    np.atleast_1d(pop), np.atleast_1d(inter))


def bare_lorentzian(gamma_gn: float, omega_mu):
    return gamma_gn ** 2 / (gamma_gn ** 2 + np.asarray(omega_mu, dtype=float) ** 2)
