"""Relaxation-limit sweep on the default Riemann data.

    python3 scripts/sweep_relaxation_limit.py --n-cells 800 --exp 0.6667 --out out/sweep

Prints the sweep CSV, successive tally ratios and the fitted gap slope.
"""

import argparse
from dataclasses import replace

from awrelax.diagnostics import loglog_slope
from awrelax.scenario import Scenario
from awrelax.sweep import DEFAULT_TAUS, run_sweep, sweep_csv


def ratios(values):
    return [max(a, b) / min(a, b) for a, b in zip(values, values[1:])]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-cells", type=int, default=800)
    ap.add_argument("--exp", type=float, default=2.0 / 3.0)
    ap.add_argument("--coupling", type=float, default=1.0)
    ap.add_argument("--taus", type=float, nargs="+", default=list(DEFAULT_TAUS))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    sc = replace(Scenario(), n_cells=args.n_cells)
    rows = run_sweep(sc, args.taus, args.exp, args.coupling, args.out, args.jobs)
    print(sweep_csv(rows), end="")
    print("d_visc ratios ", " ".join(f"{r:.3f}" for r in ratios([r.d_visc for r in rows])))
    print("d_relax ratios", " ".join(f"{r:.3f}" for r in ratios([r.d_relax for r in rows])))
    taus, gaps = [r.tau for r in rows], [r.gap_l2 for r in rows]
    print(f"gap slope all points {loglog_slope(taus, gaps):.4f}")
    if len(rows) >= 3:
        print(f"gap slope last three {loglog_slope(taus[-3:], gaps[-3:]):.4f}")


if __name__ == "__main__":
    main()
