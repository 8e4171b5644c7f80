"""Finite-volume solver for the viscous Aw-Rascle system with relaxation.

    rho_t + (m - rho P)_x   = eps rho_xx
    m_t   + (m phi)_x       = eps m_xx + (h(rho) - m) / tau

One step is Strang-split: half relaxation, full hyperbolic-diffusive update,
half relaxation.  The relaxation ODE is linear in ``m`` at frozen ``rho`` and
is integrated exactly, so ``tau`` never limits the step.  The
hyperbolic-diffusive substep uses the Rusanov flux with the analytic
eigenvalue bound, a three-point diffusion stencil and two-stage SSP
Runge-Kutta in time.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional

import numpy as np

from .diagnostics import DissipationTally, StepRecord, tally_step, window_weight
from .model import RHO_FLOOR, ModelConfig
from .region import Region, slack

log = logging.getLogger(__name__)

MAX_REJECTIONS = 20
DIFFUSIVE_SAFETY = 0.4


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid:
    n_cells: int
    dx: float
    x_left: float = 0.0
    bc: str = "periodic"

    def __post_init__(self):
        if self.n_cells < 4:
            raise ValueError("need at least 4 cells")
        if not self.dx > 0:
            raise ValueError("dx must be positive")
        if self.bc not in ("periodic", "outflow"):
            raise ValueError(f"unknown boundary condition {self.bc!r}")

    @classmethod
    def uniform(cls, n_cells: int, x_left: float, x_right: float, bc: str = "periodic") -> "Grid":
        return cls(n_cells, (x_right - x_left) / n_cells, x_left, bc)

    @property
    def x_right(self) -> float:
        return self.x_left + self.n_cells * self.dx

    @property
    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx


@dataclass(frozen=True)
class SolverParams:
    epsilon: float
    tau: float
    cfl: float = 0.5
    rho_floor: float = RHO_FLOOR
    t_final: float = 0.4

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if not self.tau > 0:
            raise ValueError("tau must be > 0")
        if not 0 < self.cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")


@dataclass
class FieldPair:
    rho: np.ndarray
    m: np.ndarray
    t: float = 0.0

    def copy(self) -> "FieldPair":
        return FieldPair(self.rho.copy(), self.m.copy(), self.t)


@dataclass
class StepStats:
    n_steps: int = 0
    n_rejected: int = 0
    w_min: float = np.inf
    w_max: float = -np.inf
    z_min: float = np.inf
    z_max: float = -np.inf
    sigma_min: float = np.inf
    sigma_history: List[float] = field(default_factory=list)
    tally: DissipationTally = field(default_factory=DissipationTally)


def apply_initial_data(grid: Grid, rho0: Callable, m0: Callable, floor_shift: float = 0.0,
                       rho_floor: float = RHO_FLOOR) -> FieldPair:
    """Sample profiles at cell centres; ``floor_shift`` is added to the density.

    ``m0`` may be a callable of ``x`` or of ``(x, rho)`` -- the latter lets the
    momentum depend on the shifted density, e.g. ``m0 = lambda x, r: h(r)``.
    """
    x = grid.centers
    base = np.asarray(rho0(x), dtype=float) * np.ones_like(x)
    if not np.all(np.isfinite(base)):
        raise ValueError("density profile is not finite")
    if np.any(base < 0):
        raise ValueError("density profile is negative somewhere")
    rho = base + floor_shift
    if np.any(rho < rho_floor):
        raise ValueError("shifted density below the floor")
    try:
        m = m0(x, rho)
    except TypeError:
        m = m0(x)
    m = np.asarray(m, dtype=float) * np.ones_like(x)
    if not np.all(np.isfinite(m)):
        raise ValueError("momentum profile is not finite")
    return FieldPair(rho, m, 0.0)


def rescaled_mode(p: SolverParams) -> SolverParams:
    """Parameters of the system in ``(y, s) = (x, t) / tau``.

    The change of variables maps viscosity to ``eps / tau`` and the relaxation
    time to 1; the map is exact, including on matched discretizations.
    """
    if not p.tau > 0:
        raise ValueError("tau must be > 0")
    return replace(p, epsilon=p.epsilon / p.tau, tau=1.0, t_final=p.t_final / p.tau)


def rescaled_grid(grid: Grid, tau: float) -> Grid:
    return replace(grid, dx=grid.dx / tau, x_left=grid.x_left / tau)


def _pad(u, bc):
    if bc == "periodic":
        return np.concatenate((u[-1:], u, u[:1]))
    return np.concatenate((u[:1], u, u[-1:]))


class RelaxationSolver:
    def __init__(self, model: ModelConfig, grid: Grid, params: SolverParams,
                 region: Optional[Region] = None, weight: Optional[np.ndarray] = None):
        self.model = model
        self.grid = grid
        self.params = params
        self.region = region
        if weight is None:
            weight = window_weight(grid.centers, grid.x_left, grid.x_right)
        self.weight = np.asarray(weight, dtype=float)

    # -- time step ----------------------------------------------------------

    def dt_bounds(self, f: FieldPair):
        """``(cfl dx / max|lambda|, 0.4 dx**2 / eps)``; inactive bounds are inf."""
        p, g = self.params, self.grid
        lam = self.model.max_speed(f.rho, f.m, p.rho_floor)
        if not np.all(np.isfinite(lam)):
            raise SolverError("non-finite wave speeds")
        lam_max = float(lam.max())
        dt_adv = p.cfl * g.dx / lam_max if lam_max > 0 else np.inf
        dt_diff = DIFFUSIVE_SAFETY * g.dx**2 / p.epsilon if p.epsilon > 0 else np.inf
        return dt_adv, dt_diff

    def stable_dt(self, f: FieldPair) -> float:
        """Harmonic combination of the two bounds.

        Each forward-Euler stage is then a convex combination of neighbouring
        states (advective plus diffusive weight <= max(cfl, 0.8)).  The plain
        minimum of the bounds is not: it lets the Rusanov and physical
        diffusion numbers add up past 1/2.
        """
        dt_adv, dt_diff = self.dt_bounds(f)
        return 1.0 / (1.0 / dt_adv + 1.0 / dt_diff)

    # -- substeps -----------------------------------------------------------

    def rhs(self, rho, m):
        """Semi-discrete hyperbolic-diffusive operator (no source)."""
        model, g, eps = self.model, self.grid, self.params.epsilon
        rp = _pad(rho, g.bc)
        mp = _pad(m, g.bc)
        f = model.flux(rp, mp, self.params.rho_floor)
        a = model.max_speed(rp, mp, self.params.rho_floor)
        a_face = np.maximum(a[:-1], a[1:])
        flux_r = 0.5 * (f[0, :-1] + f[0, 1:]) - 0.5 * a_face * (rp[1:] - rp[:-1])
        flux_m = 0.5 * (f[1, :-1] + f[1, 1:]) - 0.5 * a_face * (mp[1:] - mp[:-1])
        d_rho = -(flux_r[1:] - flux_r[:-1]) / g.dx
        d_m = -(flux_m[1:] - flux_m[:-1]) / g.dx
        if eps > 0:
            k = eps / g.dx**2
            d_rho = d_rho + k * (rp[2:] - 2.0 * rho + rp[:-2])
            d_m = d_m + k * (mp[2:] - 2.0 * m + mp[:-2])
        return d_rho, d_m

    def _valid(self, rho, m):
        return (np.all(np.isfinite(rho)) and np.all(np.isfinite(m))
                and rho.min() >= self.params.rho_floor)

    def hyperbolic_diffusive_substep(self, f: FieldPair, dt: float) -> Optional[FieldPair]:
        """SSP-RK2 update; returns None if a stage leaves the admissible set."""
        d_rho, d_m = self.rhs(f.rho, f.m)
        rho1 = f.rho + dt * d_rho
        m1 = f.m + dt * d_m
        if not self._valid(rho1, m1):
            return None
        d_rho, d_m = self.rhs(rho1, m1)
        rho2 = 0.5 * (f.rho + rho1 + dt * d_rho)
        m2 = 0.5 * (f.m + m1 + dt * d_m)
        if not self._valid(rho2, m2):
            return None
        return FieldPair(rho2, m2, f.t + dt)

    def relaxation_substep(self, f: FieldPair, dt: float) -> FieldPair:
        h = self.model.h(f.rho)
        m = h + (f.m - h) * np.exp(-dt / self.params.tau)
        return FieldPair(f.rho, m, f.t)

    def step(self, f: FieldPair, dt: float):
        """One Strang step of length ``dt``; returns ``(field, record)`` or None."""
        gap_a = f.m - self.model.h(f.rho)
        g1 = self.relaxation_substep(f, 0.5 * dt)
        g2 = self.hyperbolic_diffusive_substep(g1, dt)
        if g2 is None:
            return None
        gap_b = g2.m - self.model.h(g2.rho)
        g3 = self.relaxation_substep(g2, 0.5 * dt)
        return g3, StepRecord(dt, gap_a, g1.rho, g1.m, gap_b)

    # -- driver -------------------------------------------------------------

    def observe(self, f: FieldPair, stats: StepStats):
        inv = self.model.riemann_invariants(f.rho, f.m, self.params.rho_floor)
        stats.w_min = min(stats.w_min, float(inv.W.min()))
        stats.w_max = max(stats.w_max, float(inv.W.max()))
        stats.z_min = min(stats.z_min, float(inv.Z.min()))
        stats.z_max = max(stats.z_max, float(inv.Z.max()))
        if self.region is not None:
            s = float(slack(self.model, self.region, f.rho, f.m, self.params.rho_floor).min())
            stats.sigma_min = min(stats.sigma_min, s)
            stats.sigma_history.append(s)

    def advance(self, f: FieldPair, t_target: float, dt: Optional[float] = None,
                stats: Optional[StepStats] = None, history: Optional[list] = None):
        """March ``f`` to ``t_target``.

        ``dt`` fixes the step (clipped at the end); otherwise it is recomputed
        from ``stable_dt`` every step.  Per-step records are appended to
        ``history`` when given.  Returns ``(field, stats)``.
        """
        p, g = self.params, self.grid
        if stats is None:
            stats = StepStats()
            self.observe(f, stats)
        f = f.copy()
        tol = 1e-12 * max(1.0, abs(t_target))
        while t_target - f.t > tol:
            h = dt if dt is not None else self.stable_dt(f)
            h = min(h, t_target - f.t)
            for _ in range(MAX_REJECTIONS + 1):
                out = self.step(f, h)
                if out is not None:
                    break
                stats.n_rejected += 1
                h *= 0.5
            else:
                raise SolverError(f"step rejected {MAX_REJECTIONS} times at t={f.t:.17g}")
            new, rec = out
            stats.tally = stats.tally + tally_step(rec, self.weight, p.epsilon, p.tau, g.dx, g.bc)
            if history is not None:
                history.append(rec)
            f = new
            stats.n_steps += 1
            self.observe(f, stats)
        return f, stats
