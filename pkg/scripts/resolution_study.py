"""Grid dependence of the sweep diagnostics that miss their targets at 800 cells.

For each resolution, runs the default sweep and prints the successive
D_relax ratios (max/min) and the gap slope, next to the continuum prediction.

Continuum picture: with eps = tau**p the viscous shock has width ~ eps, the
first-order gap is m - h ~ tau * rho_x, so ||m - h||_2 ~ tau / sqrt(eps) and
D_relax ~ ||m - h||_2**2 / tau * t ~ tau / eps.  For p = 2/3 that is
gap ~ tau**(2/3) and D_relax ~ tau**(1/3).

    python3 scripts/resolution_study.py --cells 800 1600 3200
"""

import argparse
from dataclasses import replace

import numpy as np

from awrelax.diagnostics import loglog_slope
from awrelax.scenario import Scenario
from awrelax.sweep import DEFAULT_TAUS, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cells", type=int, nargs="+", default=[400, 800, 1600])
    ap.add_argument("--exp", type=float, default=2.0 / 3.0)
    args = ap.parse_args()

    taus = np.array(DEFAULT_TAUS)
    law = (taus / taus ** args.exp)
    print("continuum D_relax ratios", " ".join(f"{max(a, b) / min(a, b):.3f}" for a, b in zip(law, law[1:])))
    print(f"continuum gap slope {1 - args.exp / 2:.4f}")
    for n in args.cells:
        rows = run_sweep(replace(Scenario(), n_cells=n), taus, args.exp)
        d = [r.d_relax for r in rows]
        ratios = " ".join(f"{max(a, b) / min(a, b):.3f}" for a, b in zip(d, d[1:]))
        slope = loglog_slope(taus, [r.gap_l2 for r in rows])
        tail = loglog_slope(taus[-3:], [r.gap_l2 for r in rows][-3:])
        print(f"n={n:5d} d_relax ratios {ratios}  gap slope {slope:.4f} (last three {tail:.4f})")


if __name__ == "__main__":
    main()
