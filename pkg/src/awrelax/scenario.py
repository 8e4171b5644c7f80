"""Flat ``key=value`` scenario files and the objects built from them.

Blank lines and ``#`` comments are ignored.  Unknown keys are errors;
missing keys take the defaults below.  ``serialize`` writes every key in a
fixed order with shortest round-trip float formatting, so
``serialize(parse(serialize(s))) == serialize(s)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Tuple

import numpy as np

from .model import ModelConfig
from .region import Region
from .viscous import FieldPair, Grid, SolverParams, apply_initial_data

PROFILES = ("uniform", "riemann", "smooth-bump")
MOMENTUM_MODES = ("equilibrium", "explicit")
BOUNDARIES = ("periodic", "outflow")


class ScenarioError(ValueError):
    def __init__(self, msg, line=None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass(frozen=True)
class Scenario:
    # model
    gamma: float = 1.0
    kappa: float = 1.0
    a: float = 2.0
    b: float = 1.5
    # region
    c1: float = 2.0
    c2: float = 0.7
    # grid
    n_cells: int = 400
    x_left: float = -1.0
    x_right: float = 1.0
    bc: str = "periodic"
    # solver
    epsilon: float = 0.01
    tau: float = 0.001
    cfl: float = 0.5
    rho_floor: float = 1e-8
    floor_shift: float = 0.0
    t_final: float = 0.4
    # initial data
    profile: str = "riemann"
    momentum: str = "equilibrium"
    rho0: float = 0.3
    m0: float = 0.0
    rho_left: float = 0.2
    rho_right: float = 0.5
    m_left: float = 0.0
    m_right: float = 0.0
    x_jump: float = 0.0
    bump_amplitude: float = 0.1
    bump_center: float = 0.0
    bump_width: float = 0.5
    # output
    snapshot_times: Tuple[float, ...] = ()
    output_dir: str = "out"
    seed: int = 0

    def __post_init__(self):
        validate(self)

    # -- builders -----------------------------------------------------------

    def model(self) -> ModelConfig:
        return ModelConfig(gamma=self.gamma, kappa=self.kappa, a=self.a, b=self.b)

    def region(self) -> Region:
        return Region(self.c1, self.c2)

    def grid(self) -> Grid:
        return Grid.uniform(self.n_cells, self.x_left, self.x_right, self.bc)

    def params(self, **overrides) -> SolverParams:
        p = SolverParams(self.epsilon, self.tau, self.cfl, self.rho_floor, self.t_final)
        return replace(p, **overrides) if overrides else p

    def density_profile(self):
        if self.profile == "uniform":
            return lambda x: np.full_like(x, self.rho0)
        if self.profile == "riemann":
            return lambda x: np.where(x < self.x_jump, self.rho_left, self.rho_right)

        def bump(x):
            s = (x - self.bump_center) / self.bump_width
            inside = np.abs(s) < 1
            q = np.where(inside, 1.0 - s * s, 1.0)
            return self.rho0 + self.bump_amplitude * np.where(inside, np.exp(1.0 - 1.0 / q), 0.0)
        return bump

    def momentum_profile(self, model: ModelConfig, equilibrium: bool = False):
        if equilibrium or self.momentum == "equilibrium":
            return lambda x, rho: model.h(rho)
        if self.profile == "riemann":
            return lambda x: np.where(x < self.x_jump, self.m_left, self.m_right)
        return lambda x: np.full_like(x, self.m0)

    def initial_field(self, model: ModelConfig = None, grid: Grid = None,
                      equilibrium: bool = False) -> FieldPair:
        model = model or self.model()
        grid = grid or self.grid()
        return apply_initial_data(grid, self.density_profile(),
                                  self.momentum_profile(model, equilibrium),
                                  self.floor_shift, self.rho_floor)


_TYPES = {f.name: f.type for f in fields(Scenario)}


def _ranges(s: Scenario):
    yield "gamma", s.gamma > 0
    yield "kappa", s.kappa > 0
    yield "n_cells", s.n_cells >= 4
    yield "x_right", s.x_right > s.x_left
    yield "bc", s.bc in BOUNDARIES
    yield "epsilon", s.epsilon >= 0
    yield "tau", s.tau > 0
    yield "cfl", 0 < s.cfl <= 1
    yield "rho_floor", s.rho_floor > 0
    yield "floor_shift", s.floor_shift >= 0
    yield "t_final", s.t_final > 0
    yield "profile", s.profile in PROFILES
    yield "momentum", s.momentum in MOMENTUM_MODES
    yield "rho0", s.rho0 >= 0
    yield "rho_left", s.rho_left >= 0
    yield "rho_right", s.rho_right >= 0
    yield "bump_width", s.bump_width > 0
    yield "snapshot_times", all(0 <= t <= s.t_final for t in s.snapshot_times)


def validate(s: Scenario):
    for name in ("gamma", "kappa", "a", "b", "c1", "c2", "x_left", "x_right", "epsilon", "tau",
                 "cfl", "rho_floor", "floor_shift", "t_final", "rho0", "m0", "rho_left",
                 "rho_right", "m_left", "m_right", "x_jump", "bump_amplitude", "bump_center",
                 "bump_width"):
        if not math.isfinite(getattr(s, name)):
            raise ScenarioError(f"{name} must be finite")
    for name, ok in _ranges(s):
        if not ok:
            raise ScenarioError(f"{name}={format_value(getattr(s, name))} out of range")


def format_value(v) -> str:
    if isinstance(v, tuple):
        return ",".join(repr(float(t)) for t in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _convert(name, raw: str, line: int):
    kind = _TYPES[name]
    try:
        if kind in ("float", float):
            return float(raw)
        if kind in ("int", int):
            return int(raw)
        if name == "snapshot_times":
            return tuple(float(t) for t in raw.split(",") if t.strip())
    except ValueError:
        raise ScenarioError(f"cannot parse {name}={raw!r}", line) from None
    return raw


def parse_scenario_text(text: str) -> Scenario:
    values = {}
    lines = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"expected key=value, got {line!r}", lineno)
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _TYPES:
            raise ScenarioError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ScenarioError(f"duplicate key {key!r}", lineno)
        values[key] = _convert(key, raw, lineno)
        lines[key] = lineno
    try:
        return Scenario(**values)
    except ScenarioError as exc:
        bad = next((k for k in lines if str(exc).startswith(f"{k}=") or str(exc).startswith(f"{k} ")), None)
        raise ScenarioError(str(exc), lines.get(bad)) from None


def parse_scenario(path) -> Scenario:
    return parse_scenario_text(Path(path).read_text())


def serialize(s: Scenario) -> str:
    return "".join(f"{f.name}={format_value(getattr(s, f.name))}\n" for f in fields(Scenario))
