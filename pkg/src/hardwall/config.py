"""Run configuration: JSON in, validated dataclass out."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import DomainError
from .potential import HardWallEnsemble, RadialPotential, from_name, polynomial_h, zero_h

COMMANDS = (
    "equilibrium",
    "norms",
    "kernel",
    "profile",
    "limit-density",
    "massone-check",
    "ward-check",
    "maxmod",
    "sample",
    "sample-maxmod",
)


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


def parse_grid(spec: Any, name: str) -> np.ndarray:
    """A grid is a list of numbers or {"linspace"|"geomspace": [lo, hi, n]}."""
    if isinstance(spec, dict):
        if len(spec) != 1:
            raise ConfigError(f"grid {name!r} must have exactly one key")
        kind, args = next(iter(spec.items()))
        if kind not in ("linspace", "geomspace") or len(args) != 3:
            raise ConfigError(f"grid {name!r}: expected linspace/geomspace with [lo, hi, n]")
        lo, hi, n = float(args[0]), float(args[1]), int(args[2])
        if n < 1:
            raise ConfigError(f"grid {name!r} is empty")
        grid = np.linspace(lo, hi, n) if kind == "linspace" else np.geomspace(lo, hi, n)
    elif isinstance(spec, (list, tuple)):
        grid = np.asarray(spec, dtype=float)
    else:
        raise ConfigError(f"grid {name!r} must be a list or a linspace/geomspace object")
    if grid.size == 0:
        raise ConfigError(f"grid {name!r} is empty")
    if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0):
        raise ConfigError(f"grid {name!r} must be finite and strictly increasing")
    return grid


@dataclass
class RunConfig:
    command: str
    potential: str = "ginibre"
    potential_params: dict = field(default_factory=dict)
    rho_star: float | None = 0.8
    alpha: float = 0.0
    alphas: list = field(default_factory=lambda: [0.0])
    h: Any = "zero"
    N: list = field(default_factory=lambda: [100])
    grids: dict = field(default_factory=dict)
    seed: int = 0
    count: int = 2000
    M: float = 4.0
    tol: float = 1e-10
    intervals: list = field(default_factory=lambda: [[0.0, 1.0]])
    include_wall_charge: bool = False
    direct: bool = True
    nodes_per_degree: int = 4096
    out: str = "out"
    raw: dict = field(default_factory=dict, repr=False)

    # ------------------------------------------------------------------ build

    def build_potential(self) -> RadialPotential:
        return from_name(self.potential, self.potential_params)

    def build_h(self):
        if self.h in (None, "zero"):
            return zero_h
        if isinstance(self.h, dict) and "poly" in self.h:
            if self.rho_star is None:
                raise ConfigError("a polynomial h needs a wall radius")
            return polynomial_h(self.h["poly"], self.rho_star)
        raise ConfigError('h must be "zero" or {"poly": [c1, c2, ...]}')

    def ensemble(self, N: int, alpha: float | None = None) -> HardWallEnsemble:
        if self.rho_star is None:
            raise ConfigError(f"command {self.command!r} needs rho_star")
        a = self.alpha if alpha is None else alpha
        return HardWallEnsemble(self.build_potential(), self.rho_star, a, int(N), self.build_h())

    def grid(self, name: str, default) -> np.ndarray:
        return parse_grid(self.grids.get(name, default), name)

    def sha256(self) -> str:
        return hashlib.sha256(json.dumps(self.raw, sort_keys=True).encode()).hexdigest()


def _num(d, key, default, kind=float):
    if key not in d:
        return default
    v = d[key]
    if v is None:
        return None
    try:
        out = kind(v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key!r} must be {kind.__name__}") from exc
    if kind is float and not math.isfinite(out):
        raise ConfigError(f"{key!r} must be finite")
    return out


_KNOWN = {
    "command", "potential", "rho_star", "alpha", "alphas", "h", "N", "grids", "seed", "count", "M",
    "tol", "intervals", "include_wall_charge", "direct", "nodes_per_degree", "out",
}


def config_from_dict(d: dict, command: str | None = None) -> RunConfig:
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(d) - _KNOWN
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cmd = d.get("command", command)
    if command is not None and cmd != command:
        raise ConfigError(f"config command {cmd!r} does not match subcommand {command!r}")
    if cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}")
    pot = d.get("potential", "ginibre")
    if isinstance(pot, str):
        name, params = pot, {}
    elif isinstance(pot, dict) and "name" in pot:
        name, params = pot["name"], dict(pot.get("params", {}))
    else:
        raise ConfigError('potential must be a name or {"name": ..., "params": {...}}')
    Ns = d.get("N", [100])
    Ns = [Ns] if isinstance(Ns, (int, float)) else list(Ns)
    if not Ns or any(int(n) != n or n < 2 for n in Ns):
        raise ConfigError("N must be an integer >= 2 or a nonempty list of them")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ConfigError("N ladder must be strictly increasing")
    cfg = RunConfig(
        command=cmd,
        potential=name,
        potential_params=params,
        rho_star=_num(d, "rho_star", 0.8),
        alpha=_num(d, "alpha", 0.0),
        alphas=[float(a) for a in d.get("alphas", [d.get("alpha", 0.0)])],
        h=d.get("h", "zero"),
        N=[int(n) for n in Ns],
        grids=dict(d.get("grids", {})),
        seed=_num(d, "seed", 0, int),
        count=_num(d, "count", 2000, int),
        M=_num(d, "M", 4.0),
        tol=_num(d, "tol", 1e-10),
        intervals=[list(map(float, iv)) for iv in d.get("intervals", [[0.0, 1.0]])],
        include_wall_charge=bool(d.get("include_wall_charge", False)),
        direct=bool(d.get("direct", True)),
        nodes_per_degree=_num(d, "nodes_per_degree", 4096, int),
        out=str(d.get("out", "out")),
        raw=d,
    )
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.rho_star is not None and not cfg.rho_star > 0:
        raise ConfigError("rho_star must be positive")
    if cfg.rho_star is None and cfg.command not in ("profile", "limit-density", "massone-check", "ward-check"):
        raise ConfigError(f"command {cfg.command!r} needs rho_star")
    if any(not a > -1 for a in [cfg.alpha, *cfg.alphas]):
        raise ConfigError("alpha must exceed -1")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    if cfg.count < 1:
        raise ConfigError("count must be positive")
    if not 0 < cfg.tol < 1:
        raise ConfigError("tol must lie in (0, 1)")
    if cfg.nodes_per_degree < 16:
        raise ConfigError("nodes_per_degree must be at least 16")
    for name, spec in cfg.grids.items():
        parse_grid(spec, name)
    try:
        cfg.build_potential()
        cfg.build_h()
    except (KeyError, DomainError) as exc:
        raise ConfigError(f"invalid potential or h: {exc}") from exc


def load_config(path: str | Path, command: str | None = None) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(data, command)
