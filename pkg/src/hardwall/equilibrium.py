"""Droplet radii and the equilibrium measure swept onto the hard wall."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError, RegimeError, UnboundedDropletError
from .potential import HardWallEnsemble, RadialPotential, laplacian

_R_CAP = 1e8


def _root(f, lo, hi):
    return brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def _inner_radius(p: RadialPotential, rho1: float) -> float:
    if p.rho0_hint is not None:
        return float(p.rho0_hint)
    grid = np.linspace(0.0, rho1, 4097)[1:]
    nonpos = np.nonzero(p.q_prime(grid) <= 0)[0]
    if nonpos.size == 0:
        return 0.0
    k = nonpos[-1]
    a, b = grid[k], grid[k + 1]
    return _root(lambda r: float(p.q_prime(r)), a, b) if p.q_prime(a) < 0 else float(a)


def _outer_bracket(p: RadialPotential, target: float) -> float:
    hi = 1.0
    while float(p.r_q_prime(hi)) < target:
        hi *= 2.0
        if hi > _R_CAP:
            raise UnboundedDropletError(f"r q'(r) never reaches {target:g} for potential {p.label}")
    return hi


def _smallest_crossing(p: RadialPotential, target: float, lo: float = 0.0) -> float:
    hi = _outer_bracket(p, target)
    grid = np.linspace(lo, hi, 4097)[1:]
    k = int(np.argmax(p.r_q_prime(grid) >= target))
    a = grid[k - 1] if k > 0 else max(lo, 1e-300)
    return _root(lambda r: float(p.r_q_prime(r)) - target, a, grid[k])


def droplet_radii(p: RadialPotential) -> tuple[float, float]:
    """(rho0, rho1) of the ring droplet {rho0 <= |zeta| <= rho1}."""
    rho1 = _smallest_crossing(p, 2.0)
    rho0 = _inner_radius(p, rho1)
    grid = np.linspace(max(rho0, 1e-12), rho1, 1000)
    if np.any(np.diff(p.r_q_prime(grid)) < -1e-12):
        raise DomainError(f"r q'(r) is not nondecreasing on the droplet of {p.label}")
    return rho0, rho1


def rho_tau(p: RadialPotential, tau: float, radii: tuple[float, float] | None = None) -> float:
    """Outer radius of the tau-droplet: smallest rho with rho q'(rho) = 2 tau."""
    if not 0 < tau <= 1:
        raise DomainError("tau must lie in (0, 1]")
    rho0, rho1 = radii if radii is not None else droplet_radii(p)
    if tau == 1:
        return rho1
    lo = max(rho0, 1e-300)
    return _root(lambda r: float(p.r_q_prime(r)) - 2.0 * tau, lo, rho1)


@dataclass(frozen=True)
class EquilibriumData:
    potential: RadialPotential
    rho0: float
    rho1: float
    rho_star: float
    tau_star: float
    singular_mass: float
    gamma_N: float
    N: int

    def density(self, r):
        """Absolutely continuous part Delta Q * 1_[rho0, rho_star] (w.r.t. dA)."""
        r = np.asarray(r, dtype=float)
        inside = (r >= self.rho0) & (r <= self.rho_star) & (r > 0)
        out = np.zeros_like(r)
        out[inside] = laplacian(self.potential, r[inside])
        return out if out.ndim else float(out)

    def ring_mass(self) -> float:
        """Integral of Delta Q over the ring with dA = 2 r dr (adaptive, copes with r^(p-2) at 0)."""
        f = lambda r: float(laplacian(self.potential, r)) * 2 * r if r > 0 else 0.0
        val, _ = quad(f, self.rho0, self.rho_star, epsabs=1e-14, epsrel=1e-13, limit=200)
        return float(val)

    def total_mass(self) -> float:
        return self.ring_mass() + self.singular_mass

    def wall_density(self) -> float:
        """Density of the singular part with respect to ds (arclength / 2 pi)."""
        return self.singular_mass / self.rho_star


def equilibrium_measure(e: HardWallEnsemble) -> EquilibriumData:
    p = e.potential
    rho0, rho1 = droplet_radii(p)
    if not rho0 < e.rho_star < rho1:
        raise RegimeError(
            f"rho_star={e.rho_star:g} not inside ({rho0:g}, {rho1:g}); "
            "only the pushed hard-wall phase is supported"
        )
    if not laplacian(p, e.rho_star) > 0:
        raise DomainError("Delta Q vanishes at the wall; strict subharmonicity required")
    tau_star = 0.5 * float(p.r_q_prime(e.rho_star))
    return EquilibriumData(
        potential=p,
        rho0=rho0,
        rho1=rho1,
        rho_star=e.rho_star,
        tau_star=tau_star,
        singular_mass=1.0 - tau_star,
        gamma_N=e.rho_star / (e.N * (1.0 - tau_star)),
        N=e.N,
    )
