"""Command line front end.

    awrelax simulate <scenario>
    awrelax sweep <scenario> --taus 0.1 0.03 0.01 --exp 0.6667
    awrelax check <scenario>
    awrelax riemann-table <scenario>

Exit status: 0 success, 1 validation failure, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .diagnostics import equilibrium_gap
from .io import format_report, write_snapshot
from .model import DomainError
from .region import (RegionError, audit_hypotheses, boundary_condition_check, fmt,
                     source_inward_check)
from .scenario import Scenario, ScenarioError, parse_scenario
from .sweep import DEFAULT_TAUS, run_sweep, sweep_csv
from .viscous import RelaxationSolver, SolverError, StepStats

log = logging.getLogger("awrelax")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2

SPEED_GAP_TOL = 1e-12
EIGEN_RESIDUAL_TOL = 1e-8


class ValidationFailure(Exception):
    pass


def _load(path) -> Scenario:
    try:
        return parse_scenario(path)
    except OSError as exc:
        raise ValidationFailure(f"cannot read scenario: {exc}") from None
    except ScenarioError as exc:
        raise ValidationFailure(f"{path}: {exc}") from None


def _build(sc: Scenario):
    try:
        model, region, grid = sc.model(), sc.region(), sc.grid()
        f0 = sc.initial_field(model, grid)
    except (RegionError, DomainError, ValueError) as exc:
        raise ValidationFailure(str(exc)) from None
    return model, region, grid, f0


# -- simulate -----------------------------------------------------------------

def cmd_simulate(sc: Scenario, outdir=None) -> int:
    model, region, grid, f0 = _build(sc)
    outdir = Path(outdir or sc.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    hull = (float(f0.rho.min()), float(f0.rho.max()))
    audit = audit_hypotheses(model, region, hull, (f0.rho, f0.m))
    solver = RelaxationSolver(model, grid, sc.params(), region)
    stats = StepStats()
    solver.observe(f0, stats)
    times = sorted(set(sc.snapshot_times)) or [sc.t_final]
    f = f0
    for i, t in enumerate(times):
        if t > f.t:
            f, stats = solver.advance(f, t, stats=stats)
        write_snapshot(outdir / f"snapshot_{i:03d}.csv", grid.centers, f.rho, f.m, model, sc.rho_floor)
    if sc.t_final > f.t:
        f, stats = solver.advance(f, sc.t_final, stats=stats)
    gap_l2, gap_inf = equilibrium_gap(model, f.rho, f.m, grid.dx)
    items = [
        ("t_final", f.t),
        ("n_steps", stats.n_steps),
        ("n_rejected", stats.n_rejected),
        ("mass_initial", float(np.sum(f0.rho) * grid.dx)),
        ("mass_final", float(np.sum(f.rho) * grid.dx)),
        ("w_min", stats.w_min), ("w_max", stats.w_max),
        ("z_min", stats.z_min), ("z_max", stats.z_max),
        ("sigma_violation", stats.sigma_min),
        ("d_visc", stats.tally.d_visc),
        ("d_relax", stats.tally.d_relax),
        ("gap_l2", gap_l2), ("gap_linf", gap_inf),
        ("snapshot_times", " ".join(fmt(t) for t in times)),
    ]
    text = ""
    if not audit.hull_ok:
        text += ("#" * 60 + "\n# WARNING: scenario fails the hypothesis audit\n"
                 "# results are outside the regime covered by the theory\n" + "#" * 60 + "\n")
    text += format_report(items) + "# hypothesis audit\n" + audit.to_text()
    (outdir / "report.txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


# -- check --------------------------------------------------------------------

def identity_scan(model, n=1000, seed=0):
    """Max deviation of ``lam2 - lam1 = rho P'`` and max eigen residual on random states."""
    rng = np.random.default_rng(seed)
    (r0, r1), (m0, m1) = model.state_box
    rho = rng.uniform(max(r0, 0.05), r1, n)
    m = rng.uniform(m0, m1, n)
    e = model.eigensystem(rho, m)
    dp = model.pressure(rho)[1]
    speed_gap = float(np.max(np.abs(e.lam2 - e.lam1 - rho * dp)))
    jac = model.jacobian(rho, m)
    worst = 0.0
    for lam, r in ((e.lam1, e.r1), (e.lam2, e.r2)):
        res = np.einsum("ijn,jn->in", jac, r) - lam * r
        worst = max(worst, float(np.max(np.hypot(res[0], res[1]))))
    return speed_gap, worst


def cmd_check(sc: Scenario) -> int:
    lines = []
    try:
        region = sc.region()
    except RegionError as exc:
        sys.stdout.write(f"region: invalid ({exc})\nresult: FAIL\n")
        return EXIT_INVALID
    model, region, grid, f0 = _build(sc)
    hull = (float(f0.rho.min()), float(f0.rho.max()))
    audit = audit_hypotheses(model, region, hull, (f0.rho, f0.m))
    bc_min = boundary_condition_check(model, region, 100, 100, seed=sc.seed)
    inward = source_inward_check(model, region, 1000, rho_range=hull)
    margin = float(model.subcharacteristic_margin(np.linspace(*hull, 1001))[3].min())
    speed_gap, residual = identity_scan(model, seed=sc.seed)
    checks = [
        ("audit_hull", audit.hull_ok),
        ("boundary_condition", bc_min > 0),
        ("source_inward", inward >= -1e-12),
        ("subcharacteristic", margin > 0),
        ("speed_gap_identity", speed_gap <= SPEED_GAP_TOL),
        ("eigen_residual", residual <= EIGEN_RESIDUAL_TOL),
    ]
    lines.append("region: valid")
    lines.append(audit.to_text().rstrip("\n"))
    lines.append(format_report([
        ("boundary_condition_min", bc_min),
        ("source_inward_min", inward),
        ("subcharacteristic_min_margin", margin),
        ("speed_gap_max_error", speed_gap),
        ("eigen_residual_max", residual),
    ]).rstrip("\n"))
    lines += [f"check {name}: {'pass' if ok else 'FAIL'}" for name, ok in checks]
    passed = all(ok for _, ok in checks)
    lines.append(f"result: {'PASS' if passed else 'FAIL'}")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if passed else EXIT_INVALID


# -- riemann-table --------------------------------------------------------------

def cmd_riemann_table(sc: Scenario) -> int:
    model, region, grid, f0 = _build(sc)
    states = []
    if sc.profile == "riemann":
        il, ir = 0, grid.n_cells - 1
        states += [("left", f0.rho[il], f0.m[il]), ("right", f0.rho[ir], f0.m[ir])]
        wl = f0.m[il] / f0.rho[il]
        zr = model.riemann_invariants(f0.rho[ir], f0.m[ir]).Z
        if wl > zr:
            mid = model.invert_invariants(wl, zr)
            states.append(("middle", float(mid.rho), float(mid.m)))
    else:
        i_lo, i_hi = int(np.argmin(f0.rho)), int(np.argmax(f0.rho))
        states += [("min", f0.rho[i_lo], f0.m[i_lo]), ("max", f0.rho[i_hi], f0.m[i_hi])]
    for label, r in (("eq_min", f0.rho.min()), ("eq_max", f0.rho.max())):
        states.append((label, float(r), float(model.h(r))))
    c = region.corner(model)
    states.append(("corner", c.rho, c.m))
    out = ["label,rho,m,W,Z,lambda1,lambda2"]
    for label, r, m in states:
        inv = model.riemann_invariants(r, m)
        e = model.eigensystem(r, m)
        out.append(",".join([label] + [fmt(v) for v in (r, m, inv.W, inv.Z, e.lam1, e.lam2)]))
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK


# -- entry point ------------------------------------------------------------------

def _taus(values):
    out = []
    for v in values:
        out += [float(t) for t in v.split(",") if t.strip()]
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="awrelax", description=__doc__.split("\n\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("simulate", help="run the viscous relaxation system")
    p.add_argument("scenario")
    p.add_argument("--output-dir", default=None)
    p = sub.add_parser("sweep", help="relaxation-limit sweep against the scalar oracle")
    p.add_argument("scenario")
    p.add_argument("--taus", nargs="+", default=None)
    p.add_argument("--exp", type=float, default=2.0 / 3.0, help="eps = K * tau**exp")
    p.add_argument("--coupling", type=float, default=1.0, help="K in eps = K * tau**exp")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output-dir", default=None)
    p = sub.add_parser("check", help="audit hypotheses and analytic identities")
    p.add_argument("scenario")
    p = sub.add_parser("riemann-table", help="W, Z and wave speeds of states of interest")
    p.add_argument("scenario")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        sc = _load(args.scenario)
        if args.command == "simulate":
            return cmd_simulate(sc, args.output_dir)
        if args.command == "check":
            return cmd_check(sc)
        if args.command == "riemann-table":
            return cmd_riemann_table(sc)
        taus = _taus(args.taus) if args.taus else list(DEFAULT_TAUS)
        try:
            outdir = Path(args.output_dir or sc.output_dir)
            rows = run_sweep(sc, taus, args.exp, args.coupling, outdir, args.jobs)
        except ValueError as exc:
            raise ValidationFailure(str(exc)) from None
        text = sweep_csv(rows)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "sweep.csv").write_text(text)
        sys.stdout.write(text)
        return EXIT_RUNTIME if any(r.error for r in rows) else EXIT_OK
    except ValidationFailure as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except SolverError as exc:
        log.error("solver failure: %s", exc)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001
        log.exception("runtime failure: %s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
