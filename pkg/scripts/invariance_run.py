"""Minimum region slack of the default Riemann run versus resolution, t in [0, 1].

    python3 scripts/invariance_run.py --cells 400 800 1600
"""

import argparse
from dataclasses import replace

import numpy as np

from awrelax.scenario import Scenario
from awrelax.viscous import RelaxationSolver


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cells", type=int, nargs="+", default=[400, 800])
    ap.add_argument("--t-final", type=float, default=1.0)
    args = ap.parse_args()
    for n in args.cells:
        sc = replace(Scenario(), n_cells=n, t_final=args.t_final)
        model, grid = sc.model(), sc.grid()
        solver = RelaxationSolver(model, grid, sc.params(), sc.region())
        _, stats = solver.advance(sc.initial_field(model, grid), sc.t_final)
        hist = np.array(stats.sigma_history)
        print(f"n={n:5d} steps={stats.n_steps:6d} initial={hist[0]:.17g} "
              f"min={hist.min():.17g} at step {int(hist.argmin())} final={hist[-1]:.17g}")


if __name__ == "__main__":
    main()
