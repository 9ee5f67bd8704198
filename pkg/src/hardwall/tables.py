"""Monotone tabulated distribution functions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError


@dataclass(frozen=True)
class CdfTable:
    """CDF tabulated at strictly increasing nodes, with log head/survival for accuracy at both ends.

    ``lo`` and ``hi`` are the support endpoints; node values are CDF(node).
    """

    nodes: np.ndarray
    values: np.ndarray
    degree: int | None = None
    lo: float = 0.0
    hi: float = 1.0
    log_head: np.ndarray | None = None
    log_survival: np.ndarray | None = None

    def __post_init__(self):
        if self.nodes.ndim != 1 or self.nodes.size < 2 or np.any(np.diff(self.nodes) <= 0):
            raise DomainError("CdfTable nodes must be strictly increasing")
        if np.any(np.diff(self.values) < 0):
            raise DomainError("CdfTable values must be nondecreasing")
        # subnormal slopes in the far head overflow inside pchip's harmonic mean; the limit (slope 0) is right
        with np.errstate(over="ignore", divide="ignore"):
            object.__setattr__(self, "_interp", PchipInterpolator(self.nodes, self.values, extrapolate=True))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip(self._interp(x), 0.0, 1.0)
        out = np.where(x <= self.lo, 0.0, out)
        out = np.where(x >= self.hi, 1.0, out)
        return out if out.ndim else float(out)

    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.values) >= 0))


def _strict(x, y):
    # keep finite pairs where both coordinates strictly increase
    keep = np.isfinite(x) & np.isfinite(y)
    x, y = x[keep], y[keep]
    if x.size == 0:
        return x, y
    mask = np.ones(x.size, dtype=bool)
    last_x, last_y = x[0], y[0]
    for i in range(1, x.size):
        if x[i] > last_x and y[i] > last_y:
            last_x, last_y = x[i], y[i]
        else:
            mask[i] = False
    return x[mask], y[mask]


@dataclass(frozen=True)
class RadialInverse:
    """Inverse CDF of a radial law on (0, hi) with head ~ r^p at 0 and survival ~ (hi - r)^q at hi."""

    hi: float
    head_power: float
    wall_power: float
    # lower branch: log r as a function of log head
    lh: np.ndarray
    lr: np.ndarray
    # upper branch: log(hi - r) as a function of log survival (both increasing after sign flip)
    ls: np.ndarray
    lgap: np.ndarray

    @classmethod
    def from_table(cls, t: CdfTable, head_power: float, wall_power: float) -> "RadialInverse":
        lh, lr = _strict(t.log_head, np.log(t.nodes))
        with np.errstate(divide="ignore"):
            gap = np.log(t.hi - t.nodes)
        # survival decreases with r; reverse so both arrays increase
        ls, lgap = _strict(t.log_survival[::-1], gap[::-1])
        return cls(t.hi, head_power, wall_power, lh, lr, ls, lgap)

    def __call__(self, u):
        """Radius with CDF value u; u < 1/2 uses the head branch, else the survival branch."""
        u = np.asarray(u, dtype=float)
        out = np.empty(u.shape)
        low = u < 0.5
        if np.any(low):
            lu = np.log(u[low])
            r = np.exp(PchipInterpolator(self.lh, self.lr, extrapolate=True)(np.clip(lu, self.lh[0], self.lh[-1])))
            below = lu < self.lh[0]
            r = np.where(below, np.exp(self.lr[0] + (lu - self.lh[0]) / self.head_power), r)
            out[low] = r
        if np.any(~low):
            ls = np.log1p(-u[~low])
            g = np.exp(PchipInterpolator(self.ls, self.lgap, extrapolate=True)(np.clip(ls, self.ls[0], self.ls[-1])))
            below = ls < self.ls[0]
            g = np.where(below, np.exp(self.lgap[0] + (ls - self.ls[0]) / self.wall_power), g)
            out[~low] = self.hi - g
        return out
