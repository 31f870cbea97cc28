"""Independent ground truth and numeric utilities.

``steady_state`` and ``probe_linear_response`` rebuild the gain from a
density-matrix model (pumped levels, phenomenological decay, a rotating-wave
drive on m-n and a first-order probe on g-n) without using the closed
form.  The rest of the module holds the quadrature, root, half-width and
extremum routines the checks are built on.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Literal, Optional, Sequence

import numpy as np
from scipy import optimize

from .errors import NoConvergence, NoHalfHeightPoint, NoInteriorExtremum, SingularSystem
from .model import DriveField, RelaxationSet, check_ratio


@dataclass(frozen=True)
class SteadyState:
    rho_mm: float
    rho_nn: float
    rho_mn: complex
    n_g: float

    @property
    def difference_mn(self) -> float:
        return self.rho_mm - self.rho_nn

    @property
    def difference_gn(self) -> float:
        return self.n_g - self.rho_nn


def steady_state(m: RelaxationSet, d: DriveField, n_m: float, n_n: float, n_g: float) -> SteadyState:
    """Populations of m, n and the drive coherence under the strong field.

    Rate model: pumping fixes the field-free populations ``n_m``, ``n_n``;
    level m decays at Γm, of which γmn lands in n; n decays at Γn.  The
    coherence amplitude R (ρ_mn = R e^{-iωt}) obeys (Γ − iΩ)R = iG(ρmm − ρnn)
    and feeds back through the stimulated term 2 G Im R.  Unknowns
    (ρmm, ρnn, Re R, Im R) are found from one real 4×4 solve.
    """
    g = d.g_abs
    gm, gn, br = m.gamma_m, m.gamma_n, m.gamma_mn_branch
    q_m = gm * n_m
    q_n = gn * n_n - br * n_m
    a = np.array([
        [-gm, 0.0, 0.0, -2.0 * g],
        [br, -gn, 0.0, 2.0 * g],
        [0.0, 0.0, m.gamma, d.detuning],
        [-g, g, -d.detuning, m.gamma],
    ])
    rhs = np.array([-q_m, -q_n, 0.0, 0.0])
    try:
        rho_mm, rho_nn, re_r, im_r = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from None
    return SteadyState(float(rho_mm), float(rho_nn), complex(re_r, im_r), float(n_g))


def probe_linear_response(m: RelaxationSet, d: DriveField, x: float, omega_mu):
    """Normalized gain from the coupled probe and Raman coherences.

    With the probe amplitude set to 1 and slowly varying parts r1 (g-n) and
    r2 (g-m), steady state gives the 2×2 system::

        (Γgn − iΩμ) r1 − iG r2        = i (n_g − ρnn)
        −iG r1 + (Γgm − i(Ωμ − Ω)) r2 = −i R*

    and the gain is Re[Γgn r1 / (i Δn_gn)], normalized so that the
    field-free line centre equals 1.  Populations use Δn_gn = 1, Δn_mn = x.
    """
    x = check_ratio(x)
    state = steady_state(m, d, n_m=x, n_n=0.0, n_g=1.0)
    w = np.atleast_1d(np.asarray(omega_mu, dtype=float))
    g = d.g_abs
    mat = np.empty((w.size, 2, 2), dtype=complex)
    mat[:, 0, 0] = m.gamma_gn - 1j * w
    mat[:, 0, 1] = -1j * g
    mat[:, 1, 0] = -1j * g
    mat[:, 1, 1] = m.gamma_gm - 1j * (w - d.detuning)
    rhs = np.empty((w.size, 2, 1), dtype=complex)
    rhs[:, 0, 0] = 1j * state.difference_gn
    rhs[:, 1, 0] = -1j * np.conj(state.rho_mn)
    try:
        sol = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from None
    value = np.real(m.gamma_gn * sol[:, 0, 0] / 1j)
    return float(value[0]) if np.ndim(omega_mu) == 0 else value.reshape(np.shape(omega_mu))


# --- quadrature -----------------------------------------------------------------

_LO_NODES, _LO_WEIGHTS = np.polynomial.legendre.leggauss(7)
_HI_NODES, _HI_WEIGHTS = np.polynomial.legendre.leggauss(15)
_NODES = np.concatenate([_LO_NODES, _HI_NODES])


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error: float
    tail: float
    intervals: int
    evaluations: int


def _as_vectorized(f: Callable) -> Callable:
    def g(xs: np.ndarray) -> np.ndarray:
        out = np.asarray(f(xs), dtype=float)
        if out.shape != xs.shape:
            out = np.array([float(f(v)) for v in xs])
        return out
    return g


class _Panel:
    __slots__ = ("a", "b", "value", "error")

    def __init__(self, a: float, b: float, value: float, error: float):
        self.a, self.b, self.value, self.error = a, b, value, error

    def __lt__(self, other: "_Panel") -> bool:
        # heapq is a min-heap; larger error first
        return self.error > other.error


def _panels(f, edges: Sequence[float]) -> List[_Panel]:
    a = np.asarray(edges[:-1], dtype=float)
    b = np.asarray(edges[1:], dtype=float)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    xs = mid[:, None] + half[:, None] * _NODES[None, :]
    ys = f(xs.ravel()).reshape(xs.shape)
    k = _LO_NODES.size
    lo = half * (ys[:, :k] @ _LO_WEIGHTS)
    hi = half * (ys[:, k:] @ _HI_WEIGHTS)
    return [_Panel(a[i], b[i], hi[i], abs(hi[i] - lo[i])) for i in range(a.size)]


def integrate_spectrum(f: Callable, half_window: float, rel_tol: float = 1e-8, *,
                       breakpoints: Iterable[float] = (), initial_panels: int = 16,
                       max_intervals: int = 50000) -> IntegralResult:
    """∫ f over the real line for a spectrum decaying like 1/Ωμ².

    The window [−W, W] is integrated by globally adaptive bisection of
    Gauss–Legendre panels (7- vs 15-point error estimate).  Outside it the
    falloff is used: T(a) = a·(f(a) + f(−a)) approximates the two tails to
    O(a⁻³), and one Richardson step between W and W/2 removes that term.
    The same construction from W/2 and W/4 gives the tail error estimate.
    Refinement runs until quadrature plus tail error is at most
    ``rel_tol``·|result|.  ``f`` should accept arrays; scalar functions are
    wrapped.
    """
    if not (1e-12 < rel_tol < 1e-2):
        raise ValueError("rel_tol must lie in (1e-12, 1e-2)")
    w = float(half_window)
    if not w > 0:
        raise ValueError("half_window must be positive")
    fv = _as_vectorized(f)
    levels = (w, 0.5 * w, 0.25 * w)
    cuts = {s * a for a in levels for s in (-1.0, 1.0)}
    cuts.update(float(p) for p in breakpoints if -w < p < w)
    cuts = sorted(cuts)
    edges: List[float] = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        edges.extend(np.linspace(a, b, initial_panels + 1)[:-1])
    edges.append(w)
    heap = _panels(fv, edges)
    heapq.heapify(heap)
    evaluations = len(heap) * _NODES.size

    ends = fv(np.array([s * a for a in levels for s in (-1.0, 1.0)]))
    evaluations += ends.size
    t_w, t_half, t_quarter = (a * (ends[2 * i] + ends[2 * i + 1]) for i, a in enumerate(levels))

    def band(p: _Panel) -> int:
        # 1: W/2 <= |x| <= W, 2: W/4 <= |x| <= W/2, 0: inside
        lo = min(abs(p.a), abs(p.b)) if p.a * p.b >= 0 else 0.0
        if lo >= 0.5 * w * (1 - 1e-15):
            return 1
        if lo >= 0.25 * w * (1 - 1e-15):
            return 2
        return 0

    sums = {0: 0.0, 1: 0.0, 2: 0.0}
    quad_err = 0.0
    for p in heap:
        sums[band(p)] += p.value
        quad_err += p.error

    while True:
        b1, b2 = sums[1], sums[2]
        tail = t_w - (t_half - b1 - t_w) / 7.0
        tail_coarse = t_half - (t_quarter - b2 - t_half) / 7.0 - b1
        tail_err = abs(tail - tail_coarse) / 31.0
        total = sums[0] + b1 + b2 + tail
        if quad_err + tail_err <= rel_tol * abs(total):
            value = math.fsum(p.value for p in heap) + tail
            return IntegralResult(value, quad_err + tail_err, tail, len(heap), evaluations)
        if tail_err > rel_tol * abs(total) and quad_err < 1e-3 * tail_err:
            raise NoConvergence(
                f"tail error {tail_err:.3g} exceeds tolerance; enlarge half_window (now {w:.3g})"
            )
        if len(heap) >= max_intervals:
            raise NoConvergence(f"no convergence after {len(heap)} intervals "
                                f"(error {quad_err + tail_err:.3g})")
        worst = heapq.heappop(heap)
        sums[band(worst)] -= worst.value
        quad_err -= worst.error
        mid = 0.5 * (worst.a + worst.b)
        for panel in _panels(fv, [worst.a, mid, worst.b]):
            sums[band(panel)] += panel.value
            quad_err += panel.error
            heapq.heappush(heap, panel)
        evaluations += 2 * _NODES.size


# --- roots, half-widths, extrema --------------------------------------------------

def find_zero_crossings(f: Callable, bracket_grid, xtol: float = 1e-12) -> List[float]:
    """Sign changes of ``f`` on a grid, each refined by Brent's method."""
    grid = np.asarray(bracket_grid, dtype=float)
    values = _as_vectorized(f)(grid)
    out: List[float] = []
    for i in range(grid.size - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            out.append(float(grid[i]))
        elif a * b < 0.0:
            out.append(float(optimize.brentq(f, grid[i], grid[i + 1], xtol=xtol, rtol=4 * np.finfo(float).eps)))
    if values.size and values[-1] == 0.0:
        out.append(float(grid[-1]))
    return out


@dataclass(frozen=True)
class Extremum:
    location: float
    value: float
    evaluations: int


def extremize_over(f: Callable[[float], float], scan, mode: Literal["max", "min", "absmax"] = "max",
                   rtol: float = 1e-8, polish: bool = True) -> Extremum:
    """Refine the best interior extremum of ``f`` found on ``scan``.

    ``scan`` is a sorted sequence of parameter values (e.g. a geometric
    ladder); the interior local maximum of the objective (f, −f or |f|) with
    the largest objective value brackets a golden-section search, which is
    then polished on the sign change of a central-difference slope.
    """
    pts = np.asarray(scan, dtype=float)
    sign = {"max": lambda v: v, "min": lambda v: -v, "absmax": abs}[mode]
    values = np.array([f(p) for p in pts])
    obj = np.array([sign(v) for v in values])
    interior = [i for i in range(1, pts.size - 1) if obj[i] >= obj[i - 1] and obj[i] >= obj[i + 1]
                and (obj[i] > obj[i - 1] or obj[i] > obj[i + 1])]
    if not interior:
        raise NoInteriorExtremum("objective is monotone on the scan")
    i = max(interior, key=lambda j: obj[j])
    a, b, c = pts[i - 1], pts[i], pts[i + 1]
    extra = 0
    # a plateau of two equal samples straddles the extremum; split it
    for j, other in ((i + 1, c), (i - 1, a)):
        if obj[j] == obj[i]:
            mid = 0.5 * (b + other)
            extra += 1
            if sign(f(mid)) > obj[i]:
                a, b, c = (b, mid, c) if other == c else (a, mid, b)
            break
    res = optimize.minimize_scalar(lambda p: -sign(f(p)), bracket=(a, b, c), method="golden", tol=rtol)
    loc = float(res.x)
    count = int(res.nfev) + pts.size + extra + 1
    if polish:
        loc, used = _polish(f, loc, max(abs(loc), abs(c - a)) * max(rtol, 1e-7), abs(c - a))
        count += used
    return Extremum(loc, float(f(loc)), count)


def _polish(f, x0: float, radius: float, bracket: float):
    """Golden section stalls near sqrt(eps); finish on the derivative's sign change.

    The difference step scales with the bracket: big enough that the slope
    clears rounding noise, small enough that its O(h²) bias stays ~1e-10.
    """
    h = max(1e-5 * bracket, 1e-3 * radius)
    calls = [0]

    def slope(x):
        calls[0] += 2
        return f(x + h) - f(x - h)

    lo, hi = x0 - 10 * radius, x0 + 10 * radius
    s_lo, s_hi = slope(lo), slope(hi)
    if s_lo * s_hi >= 0:
        return x0, calls[0]
    root = optimize.brentq(slope, lo, hi, xtol=1e-15 * max(abs(x0), 1.0), rtol=4 * np.finfo(float).eps)
    return float(root), calls[0]


def find_halfwidth(f: Callable[[float], float], center: float, scale: float = 1.0, *,
                   side: Literal["right", "left", "mean"] = "right", max_distance: Optional[float] = None,
                   locate: bool = True) -> float:
    """Distance from the extremum near ``center`` to the half-extremum level.

    When ``locate`` is set the extremum is first refined on a local scan of
    ±``scale``.  The search then walks outward geometrically up to
    ``max_distance`` (default 1e3·scale) and bisects the crossing.  A located
    peak is only known to about sqrt(eps)·width, which shifts a one-sided
    result to first order; ``side="mean"`` cancels that shift.
    """
    x0 = float(center)
    if locate:
        scan = np.linspace(x0 - scale, x0 + scale, 41)
        try:
            x0 = extremize_over(f, scan, mode="absmax", rtol=1e-12).location
        except NoInteriorExtremum:
            pass
    f0 = float(f(x0))
    if f0 == 0.0:
        raise NoHalfHeightPoint("extremum value is zero")
    limit = 1e3 * scale if max_distance is None else max_distance

    def excess(v):
        return float(f(v)) / f0 - 0.5

    def one_side(direction: int) -> float:
        prev, h = 0.0, 1e-3 * scale
        while h <= limit:
            if excess(x0 + direction * h) < 0.0:
                t = optimize.brentq(lambda s: excess(x0 + direction * s), prev, h, xtol=1e-13, rtol=1e-15)
                return float(t)
            prev, h = h, 2.0 * h
        raise NoHalfHeightPoint(f"no half-height point within {limit:.3g} on the {'right' if direction > 0 else 'left'}")

    if side == "right":
        return one_side(1)
    if side == "left":
        return one_side(-1)
    return 0.5 * (one_side(1) + one_side(-1))
