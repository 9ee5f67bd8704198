"""Finite-N correlation kernel, its rescaling at the wall, and degree-block sums.

K_N(zeta, eta) = sum_j (zeta conj(eta))^j / ||zeta^j||^2 * exp(-N (Q_N(zeta) + Q_N(eta)) / 2).
Moduli are summed in log form against the largest term; the phase of the
j-th term is exactly j (arg zeta - arg eta).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .equilibrium import EquilibriumData, equilibrium_measure
from .errors import DomainError
from .norms import DEFAULT_M, NormTable, compute_log_norms, compute_norms, critical_window, high_start
from .potential import HardWallEnsemble, RadialPotential, zero_h

_CHUNK = 2048


@dataclass(frozen=True)
class KernelContext:
    ensemble: HardWallEnsemble
    norms: NormTable
    equilibrium: EquilibriumData

    @property
    def N(self) -> int:
        return self.ensemble.N

    @property
    def gamma_N(self) -> float:
        return self.equilibrium.gamma_N


@dataclass(frozen=True)
class CorrelationMatrix:
    points: np.ndarray
    entries: np.ndarray
    det: float


def build_context(e: HardWallEnsemble, tol: float = 1e-10, threads: int = 1) -> KernelContext:
    eq = equilibrium_measure(e)
    return KernelContext(ensemble=e, norms=compute_norms(e, tol, threads), equilibrium=eq)


def _kernel_sum(log_norms, degrees, N, potential, h, alpha, rho_star, zeta, eta):
    """Sum over the given degrees; rho_star=None means no wall."""
    zeta, eta = np.broadcast_arrays(np.asarray(zeta, dtype=complex), np.asarray(eta, dtype=complex))
    shape = zeta.shape
    z1, z2 = zeta.ravel(), eta.ravel()
    r1, r2 = np.abs(z1), np.abs(z2)
    out = np.zeros(z1.shape, dtype=complex)
    degrees = np.asarray(degrees, dtype=int)
    if degrees.size == 0:
        return out.reshape(shape)
    inside = np.ones(z1.shape, dtype=bool) if rho_star is None else (r1 < rho_star) & (r2 < rho_star)
    idx = np.nonzero(inside)[0]
    lnorm = log_norms[degrees]
    jd = degrees.astype(float)
    for start in range(0, idx.size, _CHUNK):
        sel = idx[start : start + _CHUNK]
        a, b = r1[sel], r2[sel]
        with np.errstate(divide="ignore"):
            logr = np.log(a) + np.log(b)
        pref = -0.5 * N * (potential.q(a) + potential.q(b)) + 0.5 * (h(a) + h(b))
        if alpha != 0:
            pref = pref + 0.5 * alpha * (np.log(rho_star - a) + np.log(rho_star - b))
        with np.errstate(invalid="ignore"):
            lt = jd[None, :] * logr[:, None]
        lt = np.where(jd[None, :] == 0, 0.0, lt) - lnorm[None, :]
        m = np.max(lt, axis=1)
        theta = np.angle(z1[sel]) - np.angle(z2[sel])
        s = np.sum(np.exp(lt - m[:, None] + 1j * jd[None, :] * theta[:, None]), axis=1)
        with np.errstate(over="ignore", invalid="ignore"):
            out[sel] = np.exp(m + pref) * s
    return out.reshape(shape)


def _scalar(x):
    return complex(x) if np.ndim(x) == 0 else x


def kernel_partial(ctx: KernelContext, zeta, eta, degrees):
    e = ctx.ensemble
    return _scalar(
        _kernel_sum(ctx.norms.log_norms, degrees, e.N, e.potential, e.h, e.alpha, e.rho_star, zeta, eta)
    )


def kernel_eval(ctx: KernelContext, zeta, eta):
    """K_N(zeta, eta); zero when either point is outside the wall."""
    return kernel_partial(ctx, zeta, eta, np.arange(ctx.N))


def _to_disk(ctx, z):
    return ctx.ensemble.rho_star - ctx.gamma_N * np.asarray(z, dtype=complex)


def rescaled_partial(ctx: KernelContext, z, w, degrees):
    g = ctx.gamma_N
    return _scalar(g * g * np.asarray(kernel_partial(ctx, _to_disk(ctx, z), _to_disk(ctx, w), degrees)))


def rescaled_kernel(ctx: KernelContext, z, w):
    """gamma_N^2 K_N(rho_star - gamma_N z, rho_star - gamma_N w)."""
    return rescaled_partial(ctx, z, w, np.arange(ctx.N))


def correlations(ctx: KernelContext, points) -> CorrelationMatrix:
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if np.unique(pts).size < pts.size:
        warnings.warn("duplicate points: correlation determinant is degenerate", RuntimeWarning, stacklevel=2)
    entries = np.asarray(rescaled_kernel(ctx, pts[:, None], pts[None, :]))
    return CorrelationMatrix(points=pts, entries=entries, det=float(np.linalg.det(entries).real))


def degree_blocks(ctx: KernelContext, M: float = DEFAULT_M) -> dict[str, np.ndarray]:
    """Degrees split into the low, critical and high ranges."""
    crit_lo, _ = critical_window(ctx.ensemble, M)
    m_n = min(high_start(ctx.ensemble, M), ctx.N)
    j = np.arange(ctx.N)
    return {"low": j[:crit_lo], "critical": j[crit_lo:m_n], "high": j[m_n:]}


def kernel_high_part(ctx: KernelContext, z, w, M: float = DEFAULT_M):
    """Rescaled kernel restricted to degrees j >= ceil(N tau_star + M sqrt N)."""
    m_n = high_start(ctx.ensemble, M)
    if m_n >= ctx.N:
        raise DomainError(f"high-degree block is empty: m_N={m_n} >= N={ctx.N}")
    return rescaled_partial(ctx, z, w, np.arange(m_n, ctx.N))


def block_contributions(ctx: KernelContext, z, w, M: float = DEFAULT_M) -> dict:
    return {name: rescaled_partial(ctx, z, w, js) for name, js in degree_blocks(ctx, M).items()}


def radial_profile(ctx: KernelContext, r):
    """One-point density K_N(r, r) at real radii r."""
    r = np.asarray(r, dtype=float)
    return np.real(kernel_eval(ctx, r, r))


def density_profile(potential: RadialPotential, N: int, r, rho_star: float | None = None, alpha: float = 0.0, h=zero_h):
    """K_N(r, r) / N, free (rho_star=None) or with a hard wall.

    Normalised so that its integral against dA = 2 r dr is 1.
    """
    r = np.asarray(r, dtype=float)
    if rho_star is None:
        log_norms = compute_log_norms(potential, N)
    else:
        log_norms = compute_norms(HardWallEnsemble(potential, rho_star, alpha, N, h)).log_norms
    k = _kernel_sum(log_norms, np.arange(N), N, potential, h, alpha, rho_star, r, r)
    return np.real(k) / N


def trace_check(ctx: KernelContext, n_nodes: int = 400) -> float:
    """int K_N(zeta, zeta) dA by Gauss-Jacobi on (0, rho_star); should equal N."""
    a = ctx.ensemble.alpha
    rs = ctx.ensemble.rho_star
    # the kernel diagonal carries (rho_star - r)^alpha; integrate it out exactly
    x, w = roots_jacobi(n_nodes, a, 0.0)
    r = 0.5 * rs * (x + 1.0)
    vals = radial_profile(ctx, r) * (rs - r) ** (-a) * 2 * r
    return float((0.5 * rs) ** (a + 1) * np.sum(w * vals))

