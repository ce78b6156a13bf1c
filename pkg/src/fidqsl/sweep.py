"""Coupling-strength sweeps of the speed-limit bound for Werner initial states."""
from __future__ import annotations

import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import ReservoirParams, werner_state
from .fidelity import FidelityKind
from .formats import fmt
from .qsl import QuadratureConfig, generic_fidelity_bound, qsl_time

COLUMNS = ("gamma0", "r", "f_tau", "x_tau", "tau_qsl", "tau_qsl_generic_f1", "quad_error")


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    lam: float = 1.0
    omega0: float = 1.0
    tau: float = 1.0
    gamma0_grid: list = field(default_factory=lambda: list(np.geomspace(0.05, 20.0, 60)))
    r_values: list = field(default_factory=lambda: [0.1, 0.5, 0.9, 1.0])
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    output_path: str | None = None

    def __post_init__(self):
        if not self.tau > 0:
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if not self.lam > 0:
            raise ConfigError(f"lambda must be positive, got {self.lam}")
        if not self.gamma0_grid:
            raise ConfigError("gamma0 grid is empty")
        if any(not g > 0 for g in self.gamma0_grid):
            raise ConfigError("all gamma0 values must be positive")
        if not self.r_values:
            raise ConfigError("r_values is empty")
        if any(not 0.0 <= r <= 1.0 for r in self.r_values):
            raise ConfigError("r values must lie in [0, 1]")
        self.gamma0_grid = sorted(set(float(g) for g in self.gamma0_grid))
        self.r_values = sorted(set(float(r) for r in self.r_values))

    @classmethod
    def from_dict(cls, obj: dict) -> "SweepConfig":
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        known = {"lambda", "omega0", "tau", "gamma0_grid", "gamma0_extra", "r_values",
                 "quadrature", "output_path"}
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        lam = float(obj.get("lambda", 1.0))
        grid = obj.get("gamma0_grid")
        if grid is None:
            grid = {"min": 0.05 * lam, "max": 20.0 * lam, "count": 60}
        if isinstance(grid, dict):
            try:
                grid = list(np.geomspace(float(grid["min"]), float(grid["max"]), int(grid["count"])))
            except (KeyError, ValueError) as exc:
                raise ConfigError(f"bad gamma0_grid: {exc}") from None
        grid = list(grid) + list(obj.get("gamma0_extra", []))
        try:
            quad = QuadratureConfig(**obj.get("quadrature", {}))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad quadrature settings: {exc}") from None
        return cls(lam=lam, omega0=float(obj.get("omega0", 1.0)), tau=float(obj.get("tau", 1.0)),
                   gamma0_grid=grid, r_values=list(obj.get("r_values", [0.1, 0.5, 0.9, 1.0])),
                   quadrature=quad, output_path=obj.get("output_path"))

    @classmethod
    def load(cls, path) -> "SweepConfig":
        try:
            obj = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(obj)


def sweep_point(cfg: SweepConfig, gamma0: float, r: float) -> dict:
    row = {"gamma0": gamma0, "r": r}
    try:
        p = ReservoirParams(gamma0, cfg.lam, cfg.omega0)
        rho0 = werner_state(r)
        res = qsl_time(rho0, p, cfg.tau, cfg.quadrature)
        row.update(f_tau=res.f_tau, x_tau=res.x_tau, tau_qsl=res.tau_qsl,
                   quad_error=res.quad_error)
        row["tau_qsl_generic_f1"] = generic_fidelity_bound(FidelityKind.F1, rho0, p, cfg.tau,
                                                           cfg.quadrature)
    except (ArithmeticError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def run_sweep(cfg: SweepConfig, threads: int = 1) -> list[dict]:
    """All (r, gamma0) points, ordered by r then gamma0."""
    points = [(g, r) for r in cfg.r_values for g in cfg.gamma0_grid]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda pt: sweep_point(cfg, *pt), points))
    return [sweep_point(cfg, g, r) for g, r in points]


def rows_to_csv(rows: list[dict]) -> str:
    with_error = any("error" in row for row in rows)
    cols = COLUMNS + (("error",) if with_error else ())
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for row in rows:
        cells = []
        for c in cols:
            v = row.get(c)
            if c == "error":
                cells.append(json.dumps(v) if v else "")
            else:
                cells.append("" if v is None else fmt(v))
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    head = lines[0].split(",")
    out = []
    for ln in lines[1:]:
        cells = ln.split(",", len(head) - 1)
        row = {}
        for k, v in zip(head, cells):
            row[k] = v if k == "error" else (float(v) if v else None)
        out.append(row)
    return out
