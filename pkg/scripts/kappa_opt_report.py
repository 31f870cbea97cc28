"""Compare the printed and re-derived closed forms for the optimal saturation.

Draws random relaxation sets, finds the numeric optimum of |alpha(0)| in kappa
and reports the relative error of both closed forms.

    python3 scripts/kappa_opt_report.py [draws] [seed]
"""
import sys

import numpy as np

from probeline.band_optimum import optimum_report
from probeline.errors import NoInteriorExtremum
from probeline.model import RelaxationSet


def main(draws=200, seed=1):
    rng = np.random.default_rng(int(seed))
    printed, rebuilt = [], []
    for _ in range(int(draws)):
        g = rng.uniform(0.1, 10.0, 5)
        m = RelaxationSet(*g, rng.uniform() * g[3])
        x = 10 ** rng.uniform(0.5, 3)
        try:
            rep = optimum_report(m, x)
        except NoInteriorExtremum:
            continue
        if rep.kappa_closed is not None:
            printed.append(rep.discrepancy("closed"))
        if rep.kappa_reconstructed is not None:
            rebuilt.append(rep.discrepancy("reconstructed"))
    for label, errs in (("printed", printed), ("re-derived", rebuilt)):
        e = np.array(errs)
        print(f"{label:>10}: n={e.size}  median {np.median(e):.3e}  max {np.max(e):.3e}  "
              f"share > 1%: {np.mean(e > 1e-2):.2f}")
    unit = optimum_report(RelaxationSet(1, 1, 1, 1, 1), 5.0)
    print(f"unit rates, x=5: numeric {unit.kappa_numeric:.6f}, printed {unit.kappa_closed:.6f}, "
          f"re-derived {unit.kappa_reconstructed:.6f}")


if __name__ == "__main__":
    main(*sys.argv[1:])
