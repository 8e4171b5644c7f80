"""Relaxation-limit sweep: shrink ``tau`` with ``eps = K tau**p`` and compare to
the Godunov solution of the equilibrium law."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .diagnostics import equilibrium_gap, l1_distance
from .io import write_density, write_snapshot
from .region import fmt
from .scalar import ScalarFlux, solve_scalar
from .scenario import Scenario
from .viscous import RelaxationSolver

log = logging.getLogger(__name__)

SWEEP_COLUMNS = ("tau", "epsilon", "l1_to_oracle", "gap_l2", "d_visc", "d_relax", "sigma_violation")
DEFAULT_TAUS = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3)


@dataclass
class SweepRow:
    tau: float
    epsilon: float
    l1_to_oracle: float = np.nan
    gap_l2: float = np.nan
    d_visc: float = np.nan
    d_relax: float = np.nan
    sigma_violation: float = np.nan
    error: Optional[str] = None

    def csv(self) -> str:
        return ",".join(fmt(getattr(self, c)) for c in SWEEP_COLUMNS)


def oracle_density(scenario: Scenario, rho0):
    model = scenario.model()
    grid = scenario.grid()
    lo, hi = float(np.min(rho0)), float(np.max(rho0))
    pad = 1e-9 * max(1.0, hi)
    flux = ScalarFlux(model, (lo - pad, hi + pad))
    return solve_scalar(flux, rho0, scenario.t_final, grid.dx, grid.bc).rho


def run_sweep_point(scenario: Scenario, tau: float, exponent: float, coupling: float = 1.0,
                    outdir=None) -> SweepRow:
    eps = coupling * tau**exponent
    row = SweepRow(tau, eps)
    try:
        sc = replace(scenario, tau=tau, epsilon=eps)
        model, grid = sc.model(), sc.grid()
        f0 = sc.initial_field(model, grid, equilibrium=True)
        solver = RelaxationSolver(model, grid, sc.params(), sc.region())
        f, stats = solver.advance(f0, sc.t_final)
        ref = oracle_density(sc, f0.rho)
        row.l1_to_oracle = l1_distance(f.rho, ref, grid.dx)
        row.gap_l2 = equilibrium_gap(model, f.rho, f.m, grid.dx)[0]
        row.d_visc = stats.tally.d_visc
        row.d_relax = stats.tally.d_relax
        row.sigma_violation = stats.sigma_min
        if outdir is not None:
            outdir = Path(outdir)
            outdir.mkdir(parents=True, exist_ok=True)
            write_snapshot(outdir / "final.csv", grid.centers, f.rho, f.m, model, sc.rho_floor)
            write_density(outdir / "oracle.csv", grid.centers, ref)
    except Exception as exc:  # recorded in the row; the sweep carries on
        log.error("sweep point tau=%s failed: %s", tau, exc)
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def _point(args):
    return run_sweep_point(*args)


def run_sweep(scenario: Scenario, taus: Sequence[float] = DEFAULT_TAUS, exponent: float = 2.0 / 3.0,
              coupling: float = 1.0, outdir=None, jobs: int = 1) -> List[SweepRow]:
    taus = [float(t) for t in taus]
    if any(b >= a for a, b in zip(taus, taus[1:])):
        raise ValueError("tau list must be strictly decreasing")
    if not 0 < exponent:
        raise ValueError("coupling exponent must be positive")
    dirs = [None if outdir is None else Path(outdir) / f"point_{i:02d}" for i in range(len(taus))]
    tasks = [(scenario, t, exponent, coupling, d) for t, d in zip(taus, dirs)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_point, tasks))
    else:
        rows = [_point(t) for t in tasks]
    # rows stay in tau-list order regardless of completion order
    return rows


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    return ",".join(SWEEP_COLUMNS) + "\n" + "".join(r.csv() + "\n" for r in rows)
