"""Scalar equilibrium law ``rho_t + g(rho)_x = 0`` with ``g = h - rho P``.

``g(rho) = rho * phi(rho, h(rho))`` is what remains of the density equation
once the momentum sits on the equilibrium curve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .model import ModelConfig


class UnsupportedFluxError(ValueError):
    pass


class ScalarFlux:
    def __init__(self, model: ModelConfig, interval: Tuple[float, float] = None, n_scan: int = 4001):
        self.model = model
        lo, hi = interval if interval is not None else model.state_box[0]
        self.interval = (float(lo), float(hi))
        x = np.linspace(lo, hi, n_scan)
        d = self.dg(x)
        sonic = [float(x[i]) for i in np.flatnonzero(d == 0.0)]
        for i in np.flatnonzero(d[:-1] * d[1:] < 0):
            sonic.append(brentq(lambda r: float(self.dg(r)), x[i], x[i + 1], xtol=1e-15))
        self.sonic = np.array(sorted(set(sonic)))

    def g(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.model.h(rho) - rho * self.model.pressure(rho)[0]

    def dg(self, rho):
        rho = np.asarray(rho, dtype=float)
        p, dp, _ = self.model.pressure(rho)
        return self.model.equilibrium_momentum(rho)[1] - p - rho * dp

    def d2g(self, rho):
        rho = np.asarray(rho, dtype=float)
        _, dp, d2p = self.model.pressure(rho)
        return self.model.equilibrium_momentum(rho)[2] - 2.0 * dp - rho * d2p

    def _check(self, *arrays):
        lo, hi = self.interval
        slop = 1e-12 * max(1.0, abs(hi))
        for a in arrays:
            if np.any(a < lo - slop) or np.any(a > hi + slop):
                raise ValueError(f"density outside flux interval {self.interval}")

    def is_concave(self, lo=None, hi=None, n=2001) -> bool:
        lo = self.interval[0] if lo is None else lo
        hi = self.interval[1] if hi is None else hi
        return bool(np.all(self.d2g(np.linspace(lo, hi, n)) <= 0))

    def max_speed(self, lo, hi, n=257) -> float:
        r = np.linspace(lo, hi, n)
        return float(np.max(np.abs(self.dg(r))))


def godunov_flux(flux: ScalarFlux, rho_l, rho_r):
    """Exact Godunov flux: min of g on [l, r] if l <= r, else max on [r, l]."""
    rho_l = np.asarray(rho_l, dtype=float)
    rho_r = np.asarray(rho_r, dtype=float)
    flux._check(rho_l, rho_r)
    gl, gr = flux.g(rho_l), flux.g(rho_r)
    up = rho_l <= rho_r
    out = np.where(up, np.minimum(gl, gr), np.maximum(gl, gr))
    lo = np.minimum(rho_l, rho_r)
    hi = np.maximum(rho_l, rho_r)
    for s in flux.sonic:
        gs = float(flux.g(s))
        inside = (lo <= s) & (s <= hi)
        out = np.where(inside & up, np.minimum(out, gs), out)
        out = np.where(inside & ~up, np.maximum(out, gs), out)
    return out


def _pad(u, bc):
    if bc == "periodic":
        return np.concatenate((u[-1:], u, u[:1]))
    return np.concatenate((u[:1], u, u[-1:]))


def step_scalar(flux: ScalarFlux, rho, dt: float, dx: float, bc: str = "periodic"):
    """One conservative Godunov step."""
    rho = np.asarray(rho, dtype=float)
    lam = flux.max_speed(rho.min(), rho.max())
    if dt * lam / dx > 1.0 + 1e-12:
        raise ValueError(f"CFL violated: dt*max|g'|/dx = {dt * lam / dx:.6g}")
    rp = _pad(rho, bc)
    f = godunov_flux(flux, rp[:-1], rp[1:])
    return rho - dt / dx * (f[1:] - f[:-1])


@dataclass
class ScalarRun:
    rho: np.ndarray
    times: List[float]
    history: Optional[List[np.ndarray]] = None


def solve_scalar(flux: ScalarFlux, rho0, t_final: float, dx: float, bc: str = "periodic",
                 cfl: float = 0.5, keep_history: bool = False) -> ScalarRun:
    rho = np.asarray(rho0, dtype=float).copy()
    lam = flux.max_speed(rho.min(), rho.max())
    dt_max = cfl * dx / lam if lam > 0 else t_final
    t = 0.0
    times = [0.0]
    history = [rho.copy()] if keep_history else None
    tol = 1e-12 * max(1.0, t_final)
    while t_final - t > tol:
        dt = min(dt_max, t_final - t)
        rho = step_scalar(flux, rho, dt, dx, bc)
        t += dt
        times.append(t)
        if keep_history:
            history.append(rho.copy())
    return ScalarRun(rho, times, history)


def exact_riemann_scalar(flux: ScalarFlux, rho_l: float, rho_r: float, xi):
    """Self-similar entropy solution at speeds ``xi = x/t``; concave ``g`` only."""
    xi = np.asarray(xi, dtype=float)
    if rho_l == rho_r:
        return np.full_like(xi, rho_l)
    lo, hi = min(rho_l, rho_r), max(rho_l, rho_r)
    if not flux.is_concave(lo, hi):
        raise UnsupportedFluxError("exact Riemann solution implemented for concave flux only")
    if rho_l < rho_r:
        s = float((flux.g(rho_r) - flux.g(rho_l)) / (rho_r - rho_l))
        return np.where(xi < s, rho_l, rho_r)
    # rarefaction: invert the decreasing map rho -> g'(rho) on [rho_r, rho_l]
    a = np.full_like(xi, rho_r)
    b = np.full_like(xi, rho_l)
    for _ in range(200):
        mid = 0.5 * (a + b)
        right = flux.dg(mid) > xi
        a = np.where(right, mid, a)
        b = np.where(right, b, mid)
        if np.all(b - a < 1e-15):
            break
    fan = 0.5 * (a + b)
    out = np.where(xi <= flux.dg(rho_l), rho_l, fan)
    return np.where(xi >= flux.dg(rho_r), rho_r, out)


# -- Kruzkov entropy residual -------------------------------------------------

def _bump(s):
    s = np.asarray(s, dtype=float)
    inside = np.abs(s) < 1
    q = np.where(inside, 1.0 - s * s, 1.0)
    b = np.where(inside, np.exp(-1.0 / q), 0.0)
    db = np.where(inside, b * (-2.0 * s / (q * q)), 0.0)
    return b, db


@dataclass(frozen=True)
class BumpTestFunction:
    """Smooth compactly supported ``phi(x, t)``, a product of two bumps."""

    x0: float
    x1: float
    t0: float
    t1: float

    def _parts(self, x, t):
        cx, hx = 0.5 * (self.x0 + self.x1), 0.5 * (self.x1 - self.x0)
        ct, ht = 0.5 * (self.t0 + self.t1), 0.5 * (self.t1 - self.t0)
        bx, dbx = _bump((np.asarray(x) - cx) / hx)
        bt, dbt = _bump((np.asarray(t) - ct) / ht)
        return bx, dbx / hx, bt, dbt / ht

    def value(self, x, t):
        bx, _, bt, _ = self._parts(x, t)
        return bx * bt

    def grad(self, x, t):
        """``(phi_x, phi_t)``"""
        bx, dbx, bt, dbt = self._parts(x, t)
        return dbx * bt, bx * dbt


def kruzkov_residual(flux: ScalarFlux, times, fields, x, dx: float, k: float, phi):
    """``-int int (|rho-k| phi_t + sign(rho-k)(g(rho)-g(k)) phi_x) dx dt``.

    ``fields[n]`` is held on ``[times[n], times[n+1])``; the test function
    is sampled at cell centres and interval midpoints.  Entropy solutions
    give a non-positive value up to quadrature error.  Returns
    ``(residual, norm)`` with ``norm`` the same quadrature of ``|phi|``.
    """
    times = np.asarray(times, dtype=float)
    x = np.asarray(x, dtype=float)
    x_lo, x_hi = x[0] - 0.5 * dx, x[-1] + 0.5 * dx
    if phi.x0 < x_lo or phi.x1 > x_hi or phi.t0 < times[0] or phi.t1 > times[-1]:
        raise ValueError("test function support is not inside the history window")
    gk = float(flux.g(k))
    res = 0.0
    norm = 0.0
    for n in range(len(times) - 1):
        dt = times[n + 1] - times[n]
        tm = 0.5 * (times[n] + times[n + 1])
        if tm <= phi.t0 or tm >= phi.t1:
            continue
        rho = np.asarray(fields[n], dtype=float)
        px, pt = phi.grad(x, tm)
        eta = np.abs(rho - k)
        q = np.sign(rho - k) * (flux.g(rho) - gk)
        res -= float(np.sum(eta * pt + q * px)) * dx * dt
        norm += float(np.sum(np.abs(phi.value(x, tm)))) * dx * dt
    return res, norm
