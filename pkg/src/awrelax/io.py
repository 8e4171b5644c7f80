"""CSV snapshots and ``key: value`` reports, all numbers at 17 significant digits."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .model import ModelConfig
from .region import fmt


def write_snapshot(path, x, rho, m, model: ModelConfig, rho_floor=1e-8):
    inv = model.riemann_invariants(rho, m, rho_floor)
    gap = np.asarray(m) - model.h(rho)
    cols = (x, rho, m, inv.W, inv.Z, gap)
    lines = ["x,rho,m,W,Z,gap"]
    lines += [",".join(fmt(c[i]) for c in cols) for i in range(len(x))]
    Path(path).write_text("\n".join(lines) + "\n")


def write_density(path, x, rho):
    lines = ["x,rho"] + [f"{fmt(a)},{fmt(b)}" for a, b in zip(x, rho)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Columns of a snapshot file as a dict of arrays."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def format_report(items) -> str:
    out = []
    for key, value in items:
        if isinstance(value, (float, np.floating)):
            value = fmt(value)
        out.append(f"{key}: {value}")
    return "\n".join(out) + "\n"
