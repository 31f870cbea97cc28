"""Two-component structure of the probe line.

The common denominator of the gain factors as (Γgn + iΩμ − α1)(Γgn + iΩμ − α2)
where α1, α2 solve α² − (Γgn − Γgm + iΩ)α + |G|² = 0.  Each root gives one
Lorentzian-like component with centre Im α and half-width Γgn − Re α.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Sequence, Tuple

import numpy as np

from .errors import AmbiguousRegime, DegenerateRoots, StepTooLarge
from .lineshape import alpha_ratio
from .model import DriveField, RelaxationSet, check_ratio, population_factor, saturation_denominator

log = logging.getLogger(__name__)

Regime = Literal["weak", "strong"]

# regime ratio inside this closed interval is neither limit
AMBIGUOUS_LOW, AMBIGUOUS_HIGH = 0.1, 10.0
DEGENERACY_FACTOR = 1e-8


@dataclass(frozen=True)
class RootPair:
    alpha1: complex
    alpha2: complex
    labeling: str = "aligned"

    def swapped(self, labeling: str = "tracked") -> "RootPair":
        return RootPair(self.alpha2, self.alpha1, labeling)

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha1, self.alpha2])

    @property
    def separation(self) -> float:
        return abs(self.alpha1 - self.alpha2)


@dataclass(frozen=True)
class Component:
    center: float
    halfwidth: float
    complex_amplitude: complex

    @property
    def peak_height(self) -> float:
        """|amplitude| / half-width; approximate when the components overlap."""
        return abs(self.complex_amplitude) / self.halfwidth


@dataclass(frozen=True)
class ComponentSummary:
    """Components in partial-fraction order.

    ``components[0]`` carries the amplitude built from α1 and the
    denominator built from α2; ``components[1]`` the reverse.
    """

    roots: RootPair
    components: Tuple[Component, Component]
    degenerate: bool

    @property
    def centers(self) -> Tuple[float, float]:
        return tuple(c.center for c in self.components)

    @property
    def halfwidths(self) -> Tuple[float, float]:
        return tuple(c.halfwidth for c in self.components)


def _linear_coefficient(m: RelaxationSet, d: DriveField) -> complex:
    return complex(m.gamma_gn - m.gamma_gm, d.detuning)


def degeneracy_threshold(m: RelaxationSet, d: DriveField) -> float:
    return DEGENERACY_FACTOR * max(m.gamma_gn, m.gamma_gm, abs(d.detuning), d.g_abs)


def roots(m: RelaxationSet, d: DriveField) -> RootPair:
    """Both roots of α² − bα + |G|² with b = Γgn − Γgm + iΩ.

    The discriminant root s is the one aligned with b (Re s·b̄ ≥ 0, ties
    broken towards Im s·b̄ > 0), i.e. b·sqrt(1 − 4|G|²/b²) on the principal
    branch.  This keeps α1 → b and α2 → 0 as |G| → 0 for every sign of
    Γgn − Γgm.  The smaller root comes from the product relation to avoid
    cancellation.
    """
    b = _linear_coefficient(m, d)
    g_sq = d.g_sq
    if b == 0:
        g = math.sqrt(g_sq)
        return RootPair(1j * g, -1j * g)
    s = cmath.sqrt(b * b - 4.0 * g_sq)
    dot = s * b.conjugate()
    if dot.real < 0 or (dot.real == 0 and dot.imag < 0):
        s = -s
    a1 = 0.5 * (b + s)
    a2 = g_sq / a1 if a1 != 0 else 0.5 * (b - s)
    return RootPair(complex(a1), complex(a2))


def regime_ratio_resonant(m: RelaxationSet, g_sq: float) -> float:
    """4|G|² / (Γgn − Γgm)²; infinite for balanced widths."""
    diff = m.gamma_gn - m.gamma_gm
    return math.inf if diff == 0 else 4.0 * g_sq / diff ** 2


def _pick_regime(ratio: float, regime: Optional[Regime]) -> Regime:
    if AMBIGUOUS_LOW <= ratio <= AMBIGUOUS_HIGH:
        raise AmbiguousRegime(f"regime ratio {ratio:.3g} lies in [0.1, 10]; neither limit applies")
    natural: Regime = "weak" if ratio < AMBIGUOUS_LOW else "strong"
    if regime is not None and regime != natural:
        raise AmbiguousRegime(f"requested {regime!r} branch but regime ratio {ratio:.3g} is {natural}")
    return natural


def asymptotic_roots_resonant(m: RelaxationSet, g_sq: float,
                              regime: Optional[Regime] = None) -> RootPair:
    """Limiting roots for a resonant drive (Ω = 0).

    weak (4|G|² ≪ (Γgn − Γgm)²): α1 ≈ δ(1 − |G|²/δ²), α2 ≈ |G|²/δ with δ = Γgn − Γgm;
    strong (4|G|² ≫ δ²): α1,2 ≈ δ/2 ± i|G|.
    """
    ratio = regime_ratio_resonant(m, g_sq)
    branch = _pick_regime(ratio, regime)
    diff = m.gamma_gn - m.gamma_gm
    if branch == "weak":
        return RootPair(diff * (1.0 - g_sq / diff ** 2), g_sq / diff, "asymptotic-weak")
    g = math.sqrt(g_sq)
    return RootPair(complex(diff / 2, g), complex(diff / 2, -g), "asymptotic-strong")


def asymptotic_roots_balanced(m: RelaxationSet, d: DriveField,
                              regime: Optional[Regime] = None, rtol: float = 1e-9) -> RootPair:
    """Limiting roots for Γgn = Γgm and a detuned drive.

    weak (4|G|² ≪ Ω²): α1 ≈ iΩ(1 + |G|²/Ω²), α2 ≈ −i|G|²/Ω;
    strong (4|G|² ≫ Ω²): α1,2 ≈ i(Ω ± 2|G|)/2.
    """
    if abs(m.gamma_gn - m.gamma_gm) > rtol * max(m.gamma_gn, m.gamma_gm):
        raise AmbiguousRegime("balanced asymptotics need gamma_gn == gamma_gm")
    omega, g_sq = d.detuning, d.g_sq
    ratio = math.inf if omega == 0 else 4.0 * g_sq / omega ** 2
    branch = _pick_regime(ratio, regime)
    if branch == "weak":
        if g_sq == 0:
            return RootPair(1j * omega, 0j, "asymptotic-weak")
        return RootPair(1j * omega * (1.0 + g_sq / omega ** 2), -1j * g_sq / omega, "asymptotic-weak")
    g = math.sqrt(g_sq)
    return RootPair(0.5j * (omega + 2 * g), 0.5j * (omega - 2 * g), "asymptotic-strong")


def match_to(reference: RootPair, other: RootPair) -> RootPair:
    """Relabel ``other`` so that its roots pair with ``reference`` by proximity."""
    keep = abs(other.alpha1 - reference.alpha1) + abs(other.alpha2 - reference.alpha2)
    swap = abs(other.alpha2 - reference.alpha1) + abs(other.alpha1 - reference.alpha2)
    return other if keep <= swap else other.swapped(other.labeling)


def _amplitudes(m: RelaxationSet, d: DriveField, x: float, pair: RootPair):
    amp_x = d.g_sq * x / saturation_denominator(m, d)
    c_pop = population_factor(m)
    interference = complex(m.gamma, d.detuning)
    scale = m.gamma_gn / (pair.alpha1 - pair.alpha2)

    def numerator(a):
        return a - amp_x * (c_pop * a - interference)

    return scale * numerator(pair.alpha1), -scale * numerator(pair.alpha2)


def component_summary(m: RelaxationSet, d: DriveField, x: float = 0.0,
                      pair: Optional[RootPair] = None) -> ComponentSummary:
    """Centres, half-widths and complex amplitudes of both components.

    The amplitude built from α1 sits over the denominator built from α2 and
    vice versa.  At a double root the amplitudes are undefined and reported
    as NaN (``degenerate=True``).
    """
    x = check_ratio(x)
    pair = roots(m, d) if pair is None else pair
    degenerate = pair.separation <= degeneracy_threshold(m, d)
    if degenerate:
        amp1 = amp2 = complex(math.nan, math.nan)
    else:
        amp1, amp2 = _amplitudes(m, d, x, pair)
    first = Component(pair.alpha2.imag, m.gamma_gn - pair.alpha2.real, amp1)
    second = Component(pair.alpha1.imag, m.gamma_gn - pair.alpha1.real, amp2)
    return ComponentSummary(pair, (first, second), degenerate)


def decompose(m: RelaxationSet, d: DriveField, x: float, omega_mu):
    """Partial-fraction evaluation of the gain.

    Returns ``(summary, value)`` where ``value`` is the real part of the sum
    of both simple fractions at ``omega_mu`` (scalar or array).
    """
    summary = component_summary(m, d, x)
    if summary.degenerate:
        raise DegenerateRoots(
            f"|alpha1 - alpha2| = {summary.roots.separation:.3g} <= {degeneracy_threshold(m, d):.3g}; "
            "use alpha_ratio instead"
        )
    omega_mu = np.asarray(omega_mu, dtype=float)
    total = 0j
    for comp in summary.components:
        total = total + comp.complex_amplitude / (comp.halfwidth + 1j * (omega_mu - comp.center))
    value = np.real(np.asarray(total))
    return summary, (float(value) if value.ndim == 0 else value)


def peak_height_ratio(summary: ComponentSummary) -> float:
    """Taller over shorter component peak height."""
    h = sorted(c.peak_height for c in summary.components)
    return h[1] / h[0]


def weak_field_height_ratio(m: RelaxationSet, g_sq: float) -> float:
    """Γgm (Γgn − Γgm)² / (Γgn |G|²): predicted peak-height ratio for a weak resonant drive."""
    return m.gamma_gm * (m.gamma_gn - m.gamma_gm) ** 2 / (m.gamma_gn * g_sq)


def weak_field_halfwidths(m: RelaxationSet, g_sq: float) -> Tuple[float, float]:
    diff = m.gamma_gn - m.gamma_gm
    return m.gamma_gn - g_sq / diff, m.gamma_gm + g_sq / diff


def alpha_from_components(m, d, x, omega_mu):
    """Convenience wrapper falling back to the closed form at a double root."""
    try:
        return decompose(m, d, x, omega_mu)[1]
    except DegenerateRoots:
        return alpha_ratio(m, d, x, omega_mu)


@dataclass
class TrackResult:
    pairs: List[RootPair]
    events: List[Tuple[int, str]] = field(default_factory=list)

    @property
    def swaps(self) -> List[int]:
        return [i for i, kind in self.events if kind == "branch_swap"]

    def as_array(self) -> np.ndarray:
        return np.array([p.as_array() for p in self.pairs])


def track_roots(m: RelaxationSet, path: Sequence[DriveField], max_jump: float = 0.5,
                tie_rtol: float = 1e-6) -> TrackResult:
    """Label roots continuously along a path of drive settings.

    At every step the pairing that minimises the summed root displacement is
    kept.  Events are recorded as ``(index, kind)``:

    * ``branch_swap``: the continuous labels differ from the labels
      :func:`roots` would assign, i.e. its square-root branch jumped;
    * ``degenerate_pass``: both pairings cost the same, which happens when the
      path runs through a double root and root identity is ambiguous.

    Raises :class:`StepTooLarge` when even the better pairing moves a root by
    more than ``max_jump`` times the local rate scale.
    """
    if not path:
        return TrackResult([])
    first = roots(m, path[0])
    pairs = [first]
    events: List[Tuple[int, str]] = []
    flipped = False
    in_tie = False
    for k in range(1, len(path)):
        prev = pairs[-1]
        raw = roots(m, path[k])
        keep = abs(raw.alpha1 - prev.alpha1) + abs(raw.alpha2 - prev.alpha2)
        swap = abs(raw.alpha2 - prev.alpha1) + abs(raw.alpha1 - prev.alpha2)
        scale = max(m.gamma_gn, m.gamma_gm, abs(path[k].detuning), path[k].g_abs,
                    abs(path[k - 1].detuning), path[k - 1].g_abs)
        if min(keep, swap) > max_jump * scale:
            raise StepTooLarge(f"step {k}: roots move by {min(keep, swap):.3g} (scale {scale:.3g})")
        tie = abs(keep - swap) <= tie_rtol * max(keep + swap, 1e-300)
        if tie:
            if not in_tie:
                events.append((k, "degenerate_pass"))
                log.debug("track_roots: degenerate pass at step %d", k)
            in_tie = True
            use_swap = flipped
        else:
            in_tie = False
            use_swap = swap < keep
            if use_swap != flipped:
                events.append((k, "branch_swap"))
                log.debug("track_roots: branch swap at step %d", k)
        flipped = use_swap
        pairs.append(raw.swapped("tracked") if use_swap else RootPair(raw.alpha1, raw.alpha2, "tracked"))
    return TrackResult(pairs, events)
