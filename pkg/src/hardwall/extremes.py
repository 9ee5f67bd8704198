"""Exact finite-N law of the largest modulus and its Weibull limit.

By radial symmetry P(|zeta|_N <= r) = prod_j (1 - t_j(r)), where t_j(r) is the
mass of the j-th radial law beyond r.  Tail masses come from the same panel
quadrature as the norms, with r forced to be a panel edge.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError
from .kernel import KernelContext
from .norms import degree_panels
from .potential import HardWallEnsemble
from .equilibrium import equilibrium_measure
from .tables import CdfTable


def _check_radii(ctx: KernelContext, r) -> np.ndarray:
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r > ctx.ensemble.rho_star) or np.any(r < 0):
        raise DomainError("radius must lie in [0, rho_star]")
    return r


def log_head_tail(ctx: KernelContext, j: int, radii, tol: float = 1e-10):
    """(log mass inside r, log mass beyond r) of the degree-j radial law, normalised."""
    radii = _check_radii(ctx, radii)
    cuts = np.unique(radii)
    ps = degree_panels(ctx.ensemble, j, tol, cuts=cuts)
    total = ps.log_total
    return ps.log_heads(radii) - total, ps.log_tails(radii) - total


def log_tail_masses(ctx: KernelContext, radii, degrees=None, tol: float = 1e-10):
    """Arrays (log_head, log_tail) of shape (len(degrees), len(radii))."""
    radii = _check_radii(ctx, radii)
    degrees = range(ctx.N) if degrees is None else degrees
    heads, tails = zip(*(log_head_tail(ctx, j, radii, tol) for j in degrees))
    return np.array(heads), np.array(tails)


def tail_mass(ctx: KernelContext, j: int, r):
    """Mass of |p_j|^2 e^{-N Q_N} outside the disk of radius r."""
    _, lt = log_head_tail(ctx, j, r)
    out = np.exp(lt)
    return out if np.ndim(r) else float(out[0])


def _log_cdf_from(lh, lt):
    # log(1 - t) via log1p when t is small, via the head when t is large
    t = np.exp(lt)
    terms = np.where(t < 0.5, np.log1p(-np.minimum(t, 0.5)), lh)
    return np.sum(terms, axis=0)


def max_modulus_log_cdf(ctx: KernelContext, r):
    lh, lt = log_tail_masses(ctx, r)
    return _log_cdf_from(lh, lt)


def max_modulus_cdf(ctx: KernelContext, r):
    """P(max |zeta_j| <= r)."""
    lp = max_modulus_log_cdf(ctx, r)
    if np.any(np.isneginf(lp)):
        warnings.warn("a tail mass equals 1 to working precision; CDF set to 0", RuntimeWarning, stacklevel=2)
    out = np.exp(lp)
    return out if np.ndim(r) else float(out[0])


def a_n_const(e: HardWallEnsemble) -> float:
    """a_N = (1/2) gamma_N^{(a+2)/(a+1)} (rho_star / Gamma(a+3))^{-1/(a+1)}."""
    a = e.alpha
    g = equilibrium_measure(e).gamma_N
    log_a = (
        -math.log(2.0)
        + (a + 2) / (a + 1) * math.log(g)
        - (math.log(e.rho_star) - float(gammaln(a + 3))) / (a + 1)
    )
    return math.exp(log_a)


def _omega_radii(ctx: KernelContext, x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise DomainError("x must be nonnegative")
    a_n = a_n_const(ctx.ensemble)
    r = ctx.ensemble.rho_star - a_n * x
    if np.any(r <= 0):
        raise DomainError("a_N x must stay below rho_star")
    return r


def i_n(ctx: KernelContext, x):
    """I_N(x) = sum_j t_j(rho_star - a_N x)."""
    r = _omega_radii(ctx, x)
    _, lt = log_tail_masses(ctx, r)
    out = np.sum(np.exp(lt), axis=0)
    return out if np.ndim(x) else float(out[0])


def weibull_cdf(alpha: float, x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("x must be nonnegative")
    out = -np.expm1(-(x ** (alpha + 1.0)))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MaxModulusLaw:
    ensemble: HardWallEnsemble
    a_N: float
    cdf: CdfTable
    i_values: np.ndarray
    max_tail: np.ndarray

    def consistency_gap(self) -> np.ndarray:
        """|(-log P(|zeta|_N <= r)) - I_N| at the grid radii."""
        with np.errstate(divide="ignore"):
            return np.abs(-np.log1p(-self.cdf.values) - self.i_values)

    def consistency_bound(self) -> np.ndarray:
        # sum_j (-log(1-t_j) - t_j) <= max_j t_j / (2 (1 - max_j t_j)) * I_N
        m = self.max_tail
        return m * self.i_values / (2 * (1 - m))


def omega_grid(n: int = 200, lo: float = 1e-3, hi: float = 5.0) -> np.ndarray:
    return np.concatenate([[0.0], np.geomspace(lo, hi, n)])


def omega_law(ctx: KernelContext, x=None) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(x, P(omega_N <= x), I_N(x), max_j t_j) on a grid of x."""
    x = omega_grid() if x is None else np.asarray(x, dtype=float)
    r = _omega_radii(ctx, x)
    lh, lt = log_tail_masses(ctx, r)
    log_p = _log_cdf_from(lh, lt)
    p_omega = -np.expm1(log_p)
    tails = np.exp(lt)
    return x, p_omega, tails.sum(axis=0), tails.max(axis=0)


def max_modulus_law(ctx: KernelContext, x=None) -> MaxModulusLaw:
    x, p, i_vals, mt = omega_law(ctx, x)
    p = np.maximum.accumulate(p)
    return MaxModulusLaw(
        ensemble=ctx.ensemble,
        a_N=a_n_const(ctx.ensemble),
        cdf=CdfTable(nodes=x, values=p, lo=0.0, hi=np.inf),
        i_values=i_vals,
        max_tail=mt,
    )


def weibull_sup_error(ctx: KernelContext, x=None) -> float:
    """sup |P(omega_N <= x) - (1 - exp(-x^{a+1}))| over a grid (default 301 points on [0, 3])."""
    x = np.linspace(0.0, 3.0, 301) if x is None else np.asarray(x, dtype=float)
    _, p, _, _ = omega_law(ctx, x)
    return float(np.max(np.abs(p - weibull_cdf(ctx.ensemble.alpha, x))))
