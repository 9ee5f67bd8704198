"""Radially symmetric external potentials and the hard-wall ensemble.

A potential is stored through its radial profile ``q`` with ``Q(zeta) = q(|zeta|)``.
All callables are vectorised over numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class RadialPotential:
    q: ArrayFn
    q_prime: ArrayFn
    q_second: ArrayFn
    label: str
    # inner droplet radius when known in closed form; None means "scan for it"
    rho0_hint: float | None = None
    params: dict = field(default_factory=dict)

    def r_q_prime(self, r):
        r = np.asarray(r, dtype=float)
        return r * self.q_prime(r)


def ginibre() -> RadialPotential:
    return power(1.0, 2.0, label="ginibre")


def power(coef: float, exponent: float, label: str | None = None) -> RadialPotential:
    """q(r) = coef * r**exponent, coef > 0, exponent > 0."""
    if coef <= 0 or exponent <= 0:
        raise DomainError("power potential needs coef > 0 and exponent > 0")
    c, p = float(coef), float(exponent)
    return RadialPotential(
        q=lambda r: c * np.asarray(r, dtype=float) ** p,
        q_prime=lambda r: c * p * np.asarray(r, dtype=float) ** (p - 1),
        q_second=lambda r: c * p * (p - 1) * np.asarray(r, dtype=float) ** (p - 2),
        label=label or f"power(c={c:g},p={p:g})",
        rho0_hint=0.0,
        params={"coef": c, "exponent": p},
    )


def monomial(m: float) -> RadialPotential:
    """q(r) = r**(2m) / m.  Every member has outer droplet radius 1."""
    if m <= 0:
        raise DomainError("monomial potential needs m > 0")
    pot = power(1.0 / m, 2.0 * m, label=f"monomial(m={m:g})")
    return pot


def tabulated(r_nodes: Sequence[float], q_values: Sequence[float], label: str = "tabulated") -> RadialPotential:
    """Cubic-spline potential through user-supplied samples.

    Derivatives come from the spline itself; monotonicity of r q'(r) is only
    checked on a grid (see :func:`check_subharmonic`).
    """
    r_nodes = np.asarray(r_nodes, dtype=float)
    q_values = np.asarray(q_values, dtype=float)
    if r_nodes.ndim != 1 or r_nodes.size < 4 or np.any(np.diff(r_nodes) <= 0):
        raise DomainError("tabulated potential needs >= 4 strictly increasing radii")
    spline = CubicSpline(r_nodes, q_values)
    d1 = spline.derivative(1)
    d2 = spline.derivative(2)
    return RadialPotential(
        q=lambda r: spline(np.asarray(r, dtype=float)),
        q_prime=lambda r: d1(np.asarray(r, dtype=float)),
        q_second=lambda r: d2(np.asarray(r, dtype=float)),
        label=label,
        rho0_hint=None,
        params={"r": r_nodes.tolist(), "q": q_values.tolist()},
    )


def from_name(name: str, params: dict | None = None) -> RadialPotential:
    params = dict(params or {})
    if name == "ginibre":
        return ginibre()
    if name == "power":
        return power(params["coef"], params["exponent"])
    if name == "monomial":
        return monomial(params["m"])
    if name == "tabulated":
        return tabulated(params["r"], params["q"])
    raise DomainError(f"unknown potential {name!r}")


def _positive_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError("radius must be positive")
    return r


def laplacian(p: RadialPotential, r):
    """Delta Q at radius r, with Delta the Laplacian divided by 4."""
    r = _positive_radius(r)
    out = (p.q_second(r) + p.q_prime(r) / r) / 4.0
    return out if out.ndim else float(out)


def v_tau(p: RadialPotential, tau: float, r):
    """V_tau(r) = q(r) - 2 tau log r."""
    r = _positive_radius(r)
    out = p.q(r) - 2.0 * tau * np.log(r)
    return out if out.ndim else float(out)


def check_subharmonic(p: RadialPotential, lo: float, hi: float, n: int = 1000, strict: bool = False) -> bool:
    """True when r q'(r) is (strictly) increasing on an n-point grid of [lo, hi]."""
    grid = np.linspace(max(lo, 1e-12), hi, n)
    d = np.diff(p.r_q_prime(grid))
    return bool(np.all(d > 0)) if strict else bool(np.all(d >= -1e-14))


def check_growth(p: RadialPotential, r_max: float) -> bool:
    """Numerical stand-in for liminf Q / log|zeta|^2 > 1, tested at r_max."""
    if r_max <= 1:
        raise DomainError("growth check needs r_max > 1")
    return bool(p.q(np.asarray(r_max)) / (2.0 * np.log(r_max)) > 1.0)


def zero_h(r):
    return np.zeros_like(np.asarray(r, dtype=float))


def polynomial_h(coeffs: Sequence[float], rho_star: float) -> Callable:
    """h(r) = sum_k coeffs[k-1] (rho_star - r)**k, k >= 1, so h(rho_star) = 0."""
    coeffs = [float(c) for c in coeffs]

    def h(r):
        s = rho_star - np.asarray(r, dtype=float)
        out = np.zeros_like(s)
        for c in reversed(coeffs):
            out = (out + c) * s
        return out

    h.coeffs = coeffs
    return h


@dataclass(frozen=True)
class HardWallEnsemble:
    potential: RadialPotential
    rho_star: float
    alpha: float
    N: int
    h: Callable = zero_h

    def __post_init__(self):
        if not self.rho_star > 0:
            raise DomainError("rho_star must be positive")
        if not self.alpha > -1:
            raise DomainError("alpha must exceed -1")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("N must be a positive integer")
        if float(np.asarray(self.h(np.asarray(self.rho_star)))) != 0.0:
            raise DomainError("perturbation h must vanish at the wall")

    def log_weight(self, r):
        """h(r) - N q(r): log of e^{-N Q_N} with the (rho_star - r)^alpha factor left out."""
        r = np.asarray(r, dtype=float)
        return self.h(r) - self.N * self.potential.q(r)


def q_n_eval(e: HardWallEnsemble, r):
    """Q_N(r) = q(r) - (alpha/N) log(rho_star - r) - h(r)/N on 0 < r < rho_star."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r >= e.rho_star):
        raise DomainError("Q_N is only finite on 0 <= r < rho_star")
    out = e.potential.q(r) - (e.alpha / e.N) * np.log(e.rho_star - r) - e.h(r) / e.N
    return out if out.ndim else float(out)
