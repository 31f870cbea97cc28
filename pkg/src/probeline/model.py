"""Domain types for the three-level ladder E_m > E_g > E_n.

A strong field drives the m-n transition; a weak probe sits near the g-n
transition.  All rates and detunings are angular frequencies in one
user-chosen unit (the CLI defaults to units of the drive-line width).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Mapping, Union

import numpy as np

from .errors import InvalidModel

_RATE_NAMES = ("gamma_gn", "gamma_gm", "gamma", "gamma_m", "gamma_n")


@dataclass(frozen=True)
class RelaxationSet:
    """Relaxation constants of the medium.

    Parameters
    ----------
    gamma_gn : float
        Half-width of the probe line g-n.
    gamma_gm : float
        Half-width of the Raman line g-m.
    gamma : float
        Half-width of the drive line m-n.
    gamma_m, gamma_n : float
        Widths of levels m and n.
    gamma_mn_branch : float
        Probability per unit time of an m -> n transfer; cannot exceed ``gamma_m``.
    """

    gamma_gn: float
    gamma_gm: float
    gamma: float
    gamma_m: float
    gamma_n: float
    gamma_mn_branch: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        _check_relaxation(self)

    def replace(self, **changes: float) -> "RelaxationSet":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return RelaxationSet(**values)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _check_relaxation(m: RelaxationSet) -> None:
    for name in _RATE_NAMES:
        value = getattr(m, name)
        if not math.isfinite(value) or value <= 0.0:
            raise InvalidModel(f"{name} must be a finite positive rate, got {value!r}")
    branch = m.gamma_mn_branch
    if not math.isfinite(branch) or branch < 0.0:
        raise InvalidModel(f"gamma_mn_branch must be finite and >= 0, got {branch!r}")
    if branch > m.gamma_m:
        raise InvalidModel(
            f"gamma_mn_branch ({branch!r}) exceeds the level width gamma_m ({m.gamma_m!r})"
        )


def validate(raw: Union[RelaxationSet, Mapping[str, float]]) -> RelaxationSet:
    """Return ``raw`` as a checked :class:`RelaxationSet`.

    Accepts either an existing set (re-checked) or a mapping of field names.
    Raises :class:`InvalidModel` naming the violated invariant.
    """
    if isinstance(raw, RelaxationSet):
        _check_relaxation(raw)
        return raw
    known = {f.name for f in fields(RelaxationSet)}
    unknown = set(raw) - known
    if unknown:
        raise InvalidModel(f"unknown relaxation keys: {sorted(unknown)}")
    try:
        return RelaxationSet(**raw)
    except TypeError as exc:
        raise InvalidModel(str(exc)) from None


@dataclass(frozen=True)
class DriveField:
    """Strong field: squared coupling ``g_sq`` = |G|^2 and rest-frame detuning."""

    g_sq: float
    detuning: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "g_sq", float(self.g_sq))
        object.__setattr__(self, "detuning", float(self.detuning))
        if not math.isfinite(self.g_sq) or self.g_sq < 0.0:
            raise InvalidModel(f"g_sq must be finite and >= 0, got {self.g_sq!r}")
        if not math.isfinite(self.detuning):
            raise InvalidModel(f"detuning must be finite, got {self.detuning!r}")

    @property
    def g_abs(self) -> float:
        return math.sqrt(self.g_sq)

    @classmethod
    def from_kappa(cls, m: RelaxationSet, kappa: float, detuning: float = 0.0) -> "DriveField":
        return cls(g_sq_from_kappa(m, kappa), detuning)


def check_ratio(x: float) -> float:
    """Population ratio Delta n_mn / Delta n_gn; only finiteness is required."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidModel(f"population ratio x must be finite, got {x!r}")
    return x


@dataclass(frozen=True)
class ProbeGrid:
    """Strictly increasing probe detunings."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float).reshape(-1)
        if pts.size == 0:
            raise InvalidModel("probe grid is empty")
        if not np.all(np.isfinite(pts)):
            raise InvalidModel("probe grid contains non-finite values")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise InvalidModel("probe grid must be strictly increasing")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def linspace(cls, lo: float, hi: float, count: int) -> "ProbeGrid":
        if not hi > lo:
            raise InvalidModel(f"grid needs min < max, got [{lo}, {hi}]")
        if count < 2:
            raise InvalidModel(f"grid count must be >= 2, got {count}")
        return cls(np.linspace(lo, hi, int(count)))

    def __len__(self) -> int:
        return self.points.size


def tau_squared(m: RelaxationSet) -> float:
    """(Gamma_m + Gamma_n - gamma_mn) / (Gamma_m Gamma_n Gamma)."""
    return (m.gamma_m + m.gamma_n - m.gamma_mn_branch) / (m.gamma_m * m.gamma_n * m.gamma)


def saturation_kappa(m: RelaxationSet, g_sq):
    """Saturation parameter kappa = 2 tau^2 |G|^2 (broadcasts over arrays)."""
    return 2.0 * tau_squared(m) * g_sq


def g_sq_from_kappa(m: RelaxationSet, kappa):
    """Inverse of :func:`saturation_kappa`."""
    if np.ndim(kappa):
        kappa = np.asarray(kappa, dtype=float)
        if np.any(kappa < 0):
            raise InvalidModel("kappa must be >= 0")
        return kappa / (2.0 * tau_squared(m))
    kappa = float(kappa)
    if not math.isfinite(kappa) or kappa < 0.0:
        raise InvalidModel(f"kappa must be finite and >= 0, got {kappa!r}")
    return kappa / (2.0 * tau_squared(m))


def population_factor(m: RelaxationSet) -> float:
    """Dimensionless weight (1 - gamma_mn/Gamma_m) * 2 Gamma / Gamma_n of the population term."""
    return (1.0 - m.gamma_mn_branch / m.gamma_m) * 2.0 * m.gamma / m.gamma_n


def saturation_denominator(m: RelaxationSet, d: DriveField) -> float:
    """Gamma^2 (1 + kappa) + Omega^2."""
    kappa = saturation_kappa(m, d.g_sq)
    return m.gamma ** 2 * (1.0 + kappa) + d.detuning ** 2
