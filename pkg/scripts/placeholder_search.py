"""Search for stand-in constants matching a target optimum, then check the other target shapes.

Fixes Gamma = Gamma_m = 1, gamma_mn = 0 and Gamma_n from the population ratio
0.322 at x = 4.14, solves for (Gamma_gn, Gamma_gm) so that kappa_opt = 2 and
alpha(0) = -32, and prints the remaining target features for comparison:
alpha(kappa=1)/alpha(2) (target ~1/3), alpha(2)/alpha(3) (target ~60) and
the kappa = 40 full width in units of Gamma_gn (target ~6).

    python3 scripts/placeholder_search.py
"""
import numpy as np
from scipy import optimize

from probeline.band_optimum import kappa_opt_numeric, line_centre_gain
from probeline.lineshape import alpha_ratio
from probeline.model import DriveField, RelaxationSet, g_sq_from_kappa
from probeline.oracle import find_halfwidth

X = 4.14
GAMMA_N = 1.0 / 0.322 - 1.0


def model(log_gn, log_gm):
    return RelaxationSet(float(np.exp(log_gn)), float(np.exp(log_gm)), 1.0, 1.0, GAMMA_N)


def residual(p):
    m = model(*p)
    try:
        ext = kappa_opt_numeric(m, X)
    except Exception:
        return [1e3, 1e3]
    return [np.log(ext.location / 2.0), np.log(abs(ext.value) / 32.0)]


def features(m):
    a = line_centre_gain(m, X, np.array([1.0, 2.0, 3.0]))
    d = DriveField(g_sq_from_kappa(m, 40.0))
    full = 2 * find_halfwidth(lambda w: alpha_ratio(m, d, X, w), 0.0, m.gamma_gn, side="mean", locate=False)
    return a[0] / a[1], a[1] / a[2], full / m.gamma_gn


def main():
    sol = optimize.fsolve(residual, x0=[np.log(50.0), np.log(0.02)], full_output=True)
    m = model(*sol[0])
    print("solved:", m)
    print("residual:", residual(sol[0]))
    r1, r3, w40 = features(m)
    print(f"alpha(1)/alpha(2) = {r1:.3f} (target ~0.33)")
    print(f"alpha(2)/alpha(3) = {r3:.3f} (target ~60)")
    print(f"kappa=40 full width = {w40:.4f} Gamma_gn (target ~6)")


if __name__ == "__main__":
    main()
