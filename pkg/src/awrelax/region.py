"""The invariant region bounded by a W level curve and a Z level curve.

``Sigma = {W <= c1, Z >= c2, rho >= 0}``.  At fixed density it is the
momentum interval ``[c2*rho + rho*P(rho), c1*rho]``, so it is convex and
closes at the corner where ``P(rho1) = c1 - c2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .model import RHO_FLOOR, ModelConfig, State


class RegionError(ValueError):
    pass


def fmt(x) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class Region:
    c1: float = 2.0
    c2: float = 0.7

    def __post_init__(self):
        if not self.c1 > self.c2:
            raise RegionError(f"need c1 > c2, got c1={self.c1!r}, c2={self.c2!r}")

    def corner(self, model: ModelConfig) -> State:
        """Intersection of ``W = c1`` with ``Z = c2``."""
        rho1 = float(model.pressure_inverse(self.c1 - self.c2))
        return State(rho1, self.c1 * rho1)

    def momentum_bounds(self, model: ModelConfig, rho):
        """Lower (Z = c2) and upper (W = c1) momentum at each density."""
        rho = np.asarray(rho, dtype=float)
        return self.c2 * rho + rho * model.pressure(rho)[0], self.c1 * rho


def slack(model: ModelConfig, region: Region, rho, m, rho_floor=RHO_FLOOR):
    """Signed slacks ``(c1 - W, Z - c2, rho)``, shape ``(3, ...)``.

    Below ``rho_floor`` the constraints are evaluated in multiplied-out form
    ``(c1 rho - m, m - c2 rho - rho P)``, which is the continuous extension to
    vacuum (there only ``m = 0`` is admitted).
    """
    rho = np.asarray(rho, dtype=float)
    m = np.asarray(m, dtype=float)
    p = model.pressure(np.maximum(rho, 0.0))[0]
    near = rho < rho_floor
    safe = np.where(near, 1.0, rho)
    w = m / safe
    s_w = np.where(near, region.c1 * rho - m, region.c1 - w)
    s_z = np.where(near, m - region.c2 * rho - rho * p, w - p - region.c2)
    return np.array([s_w, s_z, rho])


def contains(model: ModelConfig, region: Region, rho, m, rho_floor=RHO_FLOOR):
    """Membership test; returns ``(inside, slack)``."""
    s = slack(model, region, rho, m, rho_floor)
    return np.all(s >= 0, axis=0), s


def sigma_violation(model: ModelConfig, region: Region, rho, m, rho_floor=RHO_FLOOR) -> float:
    """Worst slack over all cells; negative values measure how far outside."""
    return float(slack(model, region, rho, m, rho_floor).min())


# -- geometric condition for the invariant-region argument ----------------

def boundary_gradient(model: ModelConfig, rho, m, curve: int):
    """Outward-oriented gradient of the invariant defining boundary ``curve``.

    Curve 1 is ``W = c1`` with ``xi = W``; curve 2 is ``Z = c2`` with
    ``xi = -Z`` so that both point out of the region.
    """
    rho = np.asarray(rho, dtype=float)
    m = np.asarray(m, dtype=float)
    grad_w = np.array([-m / rho**2, 1.0 / rho])
    if curve == 1:
        return grad_w
    if curve == 2:
        dp = model.pressure(rho)[1]
        return -(grad_w - np.array([dp, np.zeros_like(dp)]))
    raise ValueError("curve must be 1 or 2")


def boundary_dot(model: ModelConfig, u, y, curve: int):
    """``(U - Y) . grad xi_j(U)`` for boundary state ``U`` and state ``Y``."""
    u = np.asarray(u, dtype=float)
    y = np.asarray(y, dtype=float)
    g = boundary_gradient(model, u[0], u[1], curve)
    return (u[0] - y[0]) * g[0] + (u[1] - y[1]) * g[1]


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_interior(model: ModelConfig, region: Region, n: int, seed=0, rho_range=None):
    """``n`` states strictly inside the region."""
    rng = _rng(seed)
    rho1 = region.corner(model).rho
    lo, hi = rho_range if rho_range is not None else (0.0, rho1)
    hi = min(hi, rho1)
    rho = lo + (hi - lo) * rng.uniform(0.0, 1.0, n)
    rho = np.clip(rho, max(lo, 1e-6 * rho1), hi * (1 - 1e-9))
    m_lo, m_hi = region.momentum_bounds(model, rho)
    theta = rng.uniform(0.01, 0.99, n)
    return State(rho, m_lo + theta * (m_hi - m_lo))


def sample_boundary(model: ModelConfig, region: Region, n: int, curve: int, rho_range=None):
    rho1 = region.corner(model).rho
    lo, hi = rho_range if rho_range is not None else (1e-3 * rho1, rho1)
    rho = np.linspace(max(lo, 1e-3 * rho1), min(hi, rho1), n)
    m_lo, m_hi = region.momentum_bounds(model, rho)
    return State(rho, m_hi if curve == 1 else m_lo)


def boundary_condition_check(model: ModelConfig, region: Region, n_boundary=100,
                             n_interior=100, seed=0) -> float:
    """Minimum of ``(U - Y) . grad xi_j(U)`` over sampled boundary/interior pairs.

    ``n_boundary`` points on each curve are paired with every one of
    ``n_interior`` interior points.  A positive result certifies the
    geometric hypothesis on the sample.
    """
    if n_boundary < 1 or n_interior < 1:
        raise RegionError("empty sample")
    y = sample_interior(model, region, n_interior, seed)
    worst = np.inf
    for curve in (1, 2):
        u = sample_boundary(model, region, n_boundary, curve)
        g = boundary_gradient(model, u.rho, u.m, curve)
        dots = ((u.rho[:, None] - y.rho[None, :]) * g[0][:, None]
                + (u.m[:, None] - y.m[None, :]) * g[1][:, None])
        worst = min(worst, float(dots.min()))
    return worst


def source_inward_margin(model: ModelConfig, region: Region, rho, m, curve: int):
    """Component of the relaxation source ``(0, h - m)`` along the unit inward normal."""
    normal = -boundary_gradient(model, rho, m, curve)
    norm = np.hypot(normal[0], normal[1])
    return (model.h(rho) - np.asarray(m, dtype=float)) * normal[1] / norm


def source_inward_check(model: ModelConfig, region: Region, n=1000, rho_range=None) -> float:
    """Minimum inward margin of the source over ``n`` samples on each curve."""
    worst = np.inf
    for curve in (1, 2):
        u = sample_boundary(model, region, n, curve, rho_range)
        worst = min(worst, float(source_inward_margin(model, region, u.rho, u.m, curve).min()))
    return worst


# -- hypothesis audit -------------------------------------------------------

def equilibrium_slack(model: ModelConfig, region: Region, rho):
    """``min(c1 - W, Z - c2)`` along ``m = h(rho)``, with the limit at ``rho = 0``."""
    rho = np.asarray(rho, dtype=float)
    h, dh, _ = model.equilibrium_momentum(rho)
    safe = np.where(rho > 0, rho, 1.0)
    w = np.where(rho > 0, h / safe, dh)
    z = w - model.pressure(rho)[0]
    return np.minimum(region.c1 - w, z - region.c2)


def failing_intervals(score, lo: float, hi: float, n: int = 2001, strict: bool = False):
    """Sub-intervals of ``[lo, hi]`` where ``score < 0`` (``<= 0`` if strict).

    Detection is on a uniform grid of ``n`` points; interior endpoints are
    refined by root finding on ``score``.
    """
    if hi < lo:
        return []
    x = np.linspace(lo, hi, n) if hi > lo else np.array([lo])
    n = x.size
    s = np.asarray(score(x), dtype=float)
    bad = s <= 0 if strict else s < 0
    out = []
    i = 0
    while i < n:
        if not bad[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and bad[j + 1]:
            j += 1
        left = lo if i == 0 else _edge(score, x[i - 1], x[i])
        right = hi if j == n - 1 else _edge(score, x[j], x[j + 1])
        out.append((left, right))
        i = j + 1
    return out


def _edge(score, a, b):
    f = lambda r: float(np.asarray(score(np.array([r])))[0])
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return float(a)
    if fb == 0.0 or fa * fb > 0:
        return float(b)
    return brentq(f, a, b, xtol=1e-14)


@dataclass
class HypothesisReport:
    corner: Tuple[float, float]
    data_hull: Tuple[float, float]
    equilibrium_in_hull: bool
    subcharacteristic_in_hull: bool
    literal_containment: bool
    initial_data_inside: Optional[bool] = None
    initial_min_slack: Optional[float] = None
    violations: List[Tuple[str, float, float]] = field(default_factory=list)

    @property
    def hull_ok(self) -> bool:
        ok = self.equilibrium_in_hull and self.subcharacteristic_in_hull
        return ok and self.initial_data_inside is not False

    def to_text(self) -> str:
        lines = [
            f"corner_rho: {fmt(self.corner[0])}",
            f"corner_m: {fmt(self.corner[1])}",
            f"data_hull: {fmt(self.data_hull[0])} {fmt(self.data_hull[1])}",
            f"equilibrium_in_hull: {self.equilibrium_in_hull}",
            f"subcharacteristic_in_hull: {self.subcharacteristic_in_hull}",
            f"literal_containment: {self.literal_containment}",
        ]
        if self.initial_data_inside is not None:
            lines.append(f"initial_data_inside: {self.initial_data_inside}")
            lines.append(f"initial_min_slack: {fmt(self.initial_min_slack)}")
        for name, lo, hi in self.violations:
            lines.append(f"violation: {name} {fmt(lo)} {fmt(hi)}")
        lines.append(f"hull_ok: {self.hull_ok}")
        return "\n".join(lines) + "\n"


def audit_hypotheses(model: ModelConfig, region: Region, data_hull, initial_data=None,
                     n: int = 2001) -> HypothesisReport:
    """Check the assumptions behind the relaxation limit.

    (i) the equilibrium curve lies in the region over ``data_hull``,
    (ii) the strict subcharacteristic condition holds on ``data_hull``,
    (iii) containment of the equilibrium curve on all of ``[0, rho1)``.
    Failures are returned as intervals; nothing is adjusted.
    """
    c = region.corner(model)
    lo, hi = (float(v) for v in data_hull)
    eq = lambda r: equilibrium_slack(model, region, r)
    sub = lambda r: model.subcharacteristic_margin(r)[3]
    violations = []
    bad_eq = failing_intervals(eq, lo, hi, n)
    bad_sub = failing_intervals(sub, lo, hi, n, strict=True)
    # the open right end at the corner is excluded
    bad_lit = failing_intervals(eq, 0.0, c.rho * (1 - 1e-12), n)
    violations += [("equilibrium_outside_region", a, b) for a, b in bad_eq]
    violations += [("subcharacteristic", a, b) for a, b in bad_sub]
    violations += [("literal_containment", a, b) for a, b in bad_lit]
    report = HypothesisReport(
        corner=(c.rho, c.m), data_hull=(lo, hi),
        equilibrium_in_hull=not bad_eq, subcharacteristic_in_hull=not bad_sub,
        literal_containment=not bad_lit, violations=violations,
    )
    if initial_data is not None:
        rho0, m0 = initial_data
        report.initial_min_slack = sigma_violation(model, region, rho0, m0)
        report.initial_data_inside = report.initial_min_slack >= 0
    return report
