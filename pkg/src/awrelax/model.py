"""Closed-form pieces of the Aw-Rascle system with relaxation.

Conserved variables are the density ``rho`` and the generalized momentum
``m = rho * (v + P(rho))``.  Everything here is vectorized over numpy
arrays and free of side effects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

RHO_FLOOR = 1e-8


class DomainError(ValueError):
    """Argument outside the domain of an analytic formula."""


class VacuumError(DomainError):
    """Density too close to vacuum for W, Z or the fluxes to be finite."""


class State(NamedTuple):
    rho: np.ndarray
    m: np.ndarray


class EigenData(NamedTuple):
    lam1: np.ndarray
    lam2: np.ndarray
    r1: np.ndarray  # shape (2, ...)
    r2: np.ndarray


class InvariantPair(NamedTuple):
    W: np.ndarray
    Z: np.ndarray


def _check_floor(rho, rho_floor):
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < rho_floor):
        raise VacuumError(f"density below floor {rho_floor:g} (min {rho.min():g})")
    return rho


@dataclass(frozen=True)
class ModelConfig:
    """Pressure law ``P = kappa * rho**gamma`` and equilibrium momentum ``h``.

    ``h`` defaults to ``rho * (a - b*rho)``.  Passing ``h_table=(rho_nodes,
    h_values)`` replaces it with a C2 cubic spline through the table.
    ``state_box`` is ``((rho_min, rho_max), (m_min, m_max))``.
    """

    gamma: float = 1.0
    kappa: float = 1.0
    a: float = 2.0
    b: float = 1.5
    state_box: Tuple[Tuple[float, float], Tuple[float, float]] = ((0.0, 1.0), (0.0, 2.0))
    h_table: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]] = None
    _spline: Optional[CubicSpline] = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.gamma > 0 or not self.kappa > 0:
            raise DomainError("pressure law needs gamma > 0 and kappa > 0")
        (r0, r1), (m0, m1) = self.state_box
        if not (0 <= r0 < r1 and m0 < m1):
            raise DomainError(f"bad state box {self.state_box}")
        if self.h_table is not None:
            nodes, values = (np.asarray(v, dtype=float) for v in self.h_table)
            if nodes.ndim != 1 or nodes.shape != values.shape or nodes.size < 4:
                raise DomainError("h_table needs two equal-length 1-D sequences (>= 4 nodes)")
            object.__setattr__(self, "_spline", CubicSpline(nodes, values, bc_type="natural"))

    # -- scalar laws -------------------------------------------------------

    def pressure(self, rho):
        """Return ``(P, P', P'')`` at ``rho >= 0``."""
        rho = np.asarray(rho, dtype=float)
        if np.any(rho < 0):
            raise DomainError("pressure evaluated at negative density")
        g, k = self.gamma, self.kappa
        p = k * rho**g
        with np.errstate(divide="ignore"):
            dp = k * g * rho ** (g - 1.0)
            d2p = np.zeros_like(rho) if g == 1.0 else k * g * (g - 1.0) * rho ** (g - 2.0)
        return p, dp, d2p

    def pressure_inverse(self, p):
        p = np.asarray(p, dtype=float)
        return (p / self.kappa) ** (1.0 / self.gamma)

    def equilibrium_momentum(self, rho):
        """Return ``(h, h', h'')``; the source term relaxes ``m`` toward ``h(rho)``."""
        rho = np.asarray(rho, dtype=float)
        if self._spline is not None:
            s = self._spline
            return s(rho), s(rho, 1), s(rho, 2)
        a, b = self.a, self.b
        return rho * (a - b * rho), a - 2.0 * b * rho, np.full_like(rho, -2.0 * b)

    def h(self, rho):
        return self.equilibrium_momentum(rho)[0]

    # -- system ------------------------------------------------------------

    def velocity(self, rho, m, rho_floor=RHO_FLOOR):
        """phi(rho, m) = m/rho - P(rho), the physical velocity."""
        rho = _check_floor(rho, rho_floor)
        return np.asarray(m, dtype=float) / rho - self.pressure(rho)[0]

    def flux(self, rho, m, rho_floor=RHO_FLOOR):
        """Physical flux ``(m - rho P, m phi)``, shape ``(2, ...)``."""
        rho = _check_floor(rho, rho_floor)
        m = np.asarray(m, dtype=float)
        p = self.pressure(rho)[0]
        return np.array([m - rho * p, m * (m / rho - p)])

    def jacobian(self, rho, m, rho_floor=RHO_FLOOR):
        """Analytic flux Jacobian, shape ``(2, 2, ...)``."""
        rho = _check_floor(rho, rho_floor)
        m = np.asarray(m, dtype=float)
        p, dp, _ = self.pressure(rho)
        w = m / rho
        return np.array([
            [-p - rho * dp, np.ones_like(w)],
            [-w * w - m * dp, 2.0 * w - p],
        ])

    def eigensystem(self, rho, m, rho_floor=RHO_FLOOR) -> EigenData:
        rho = _check_floor(rho, rho_floor)
        m = np.asarray(m, dtype=float)
        p, dp, _ = self.pressure(rho)
        w = m / rho
        lam2 = w - p
        lam1 = lam2 - rho * dp
        one = np.ones_like(w)
        # second eigenvector normalized with first entry 1
        return EigenData(lam1, lam2, np.array([one, w]), np.array([one, w + rho * dp]))

    def max_speed(self, rho, m, rho_floor=RHO_FLOOR):
        e = self.eigensystem(rho, m, rho_floor)
        return np.maximum(np.abs(e.lam1), np.abs(e.lam2))

    def riemann_invariants(self, rho, m, rho_floor=RHO_FLOOR) -> InvariantPair:
        rho = _check_floor(rho, rho_floor)
        w = np.asarray(m, dtype=float) / rho
        return InvariantPair(w, w - self.pressure(rho)[0])

    def invert_invariants(self, W, Z) -> State:
        W = np.asarray(W, dtype=float)
        Z = np.asarray(Z, dtype=float)
        if np.any(W <= Z):
            raise DomainError("W <= Z has no positive-density state")
        rho = self.pressure_inverse(W - Z)
        return State(rho, W * rho)

    def nonlinearity_indicators(self, rho, m=None, rho_floor=RHO_FLOOR):
        """Return ``(grad lam1 . r1, grad lam2 . r2)``.

        Both are independent of ``m``: the first is ``-(2P' + rho P'')`` and
        the second vanishes identically.
        """
        rho = _check_floor(rho, rho_floor)
        _, dp, d2p = self.pressure(rho)
        return -(2.0 * dp + rho * d2p), np.zeros_like(rho)

    def subcharacteristic_margin(self, rho):
        """Return ``(lam1, h', lam2, margin)`` along the equilibrium curve.

        ``margin = min(h' - lam1, lam2 - h')``; the strict subcharacteristic
        condition holds wherever it is positive.  At ``rho = 0`` the limits
        ``lam1 = lam2 = h'(0) - P(0)`` are used.
        """
        rho = np.asarray(rho, dtype=float)
        h, dh, _ = self.equilibrium_momentum(rho)
        p, dp, _ = self.pressure(rho)
        safe = np.where(rho > 0, rho, 1.0)
        ve = np.where(rho > 0, h / safe, dh) - p
        lam1 = ve - rho * dp
        margin = np.minimum(dh - lam1, ve - dh)
        return lam1, dh, ve, margin
