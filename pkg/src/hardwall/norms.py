"""Squared norms of the monomials zeta^j in L^2(mu_N) and their asymptotics.

Radial symmetry makes the monomials orthogonal, so the whole kernel is fixed
by the numbers ||zeta^j||^2 = int_0^{rho_star} 2 r^{2j+1} (rho_star - r)^alpha
e^{h(r)} e^{-N q(r)} dr, which are stored as logarithms.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .equilibrium import _smallest_crossing, droplet_radii, equilibrium_measure
from .errors import DomainError, QuadratureError
from .potential import HardWallEnsemble, laplacian, v_tau
from .quadrature import adaptive_panels
from .special import log_phi_alpha

DEFAULT_M = 4.0
LOG2 = math.log(2.0)


@dataclass(frozen=True)
class NormTable:
    ensemble: HardWallEnsemble
    log_norms: np.ndarray
    # log-integrand at its peak, (j + 1/2)/N = r q'(r)/2; the engine shifts by it
    shift_logs: np.ndarray
    rel_err: np.ndarray

    @property
    def N(self) -> int:
        return self.ensemble.N


def degree_log_integrand(e: HardWallEnsemble, j: int):
    """log of 2 r^{2j+1} e^{h(r)} e^{-N q(r)}, the (rho_star - r)^alpha factor left to the engine."""

    def log_g(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return LOG2 + (2 * j + 1) * np.log(r) + e.log_weight(r)

    return log_g


def degree_panels(e: HardWallEnsemble, j: int, tol: float = 1e-10, cuts=None):
    try:
        return adaptive_panels(degree_log_integrand(e, j), (0.0, e.rho_star), e.alpha, tol, cuts=cuts, degree=j)
    except QuadratureError as exc:
        if exc.degree is None:
            raise QuadratureError(str(exc), achieved=exc.achieved, degree=j) from exc
        raise


def _peak_radii(e: HardWallEnsemble) -> np.ndarray:
    p = e.potential
    rho0, _ = droplet_radii(p)
    targets = (2 * np.arange(e.N) + 1) / e.N
    out = np.empty(e.N)
    for j, t in enumerate(targets):
        out[j] = _smallest_crossing(p, t, lo=rho0) if float(p.r_q_prime(e.rho_star)) > t else e.rho_star
    return np.clip(out, max(rho0, 1e-300), e.rho_star)


def compute_norms(e: HardWallEnsemble, tol: float = 1e-10, threads: int = 1) -> NormTable:
    """Full-quadrature log norms for j = 0..N-1."""

    def one(j):
        ps = degree_panels(e, j, tol)
        return ps.log_total, ps.rel_err

    degrees = range(e.N)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, degrees))
    else:
        results = [one(j) for j in degrees]
    log_norms = np.array([r[0] for r in results])
    rel = np.array([r[1] for r in results])
    if not np.all(np.isfinite(log_norms)):
        bad = int(np.nonzero(~np.isfinite(log_norms))[0][0])
        raise QuadratureError("non-finite norm", degree=bad)
    peaks = _peak_radii(e)
    shifts = np.array([float(degree_log_integrand(e, j)(peaks[j])) for j in range(e.N)])
    return NormTable(ensemble=e, log_norms=log_norms, shift_logs=shifts, rel_err=rel)


def compute_log_norms(potential, N: int, rho_star: float | None = None, alpha: float = 0.0, h=None, tol: float = 1e-10):
    """Log norms for j < N; rho_star=None gives the free ensemble (no wall)."""
    if rho_star is not None:
        kw = {} if h is None else {"h": h}
        return compute_norms(HardWallEnsemble(potential, rho_star, alpha, N, **kw), tol).log_norms
    _, rho1 = droplet_radii(potential)
    hi = 10.0 * rho1
    out = np.empty(N)
    for j in range(N):

        def log_g(r, j=j):
            r = np.asarray(r, dtype=float)
            with np.errstate(divide="ignore"):
                return LOG2 + (2 * j + 1) * np.log(r) - N * potential.q(r)

        out[j] = adaptive_panels(log_g, (0.0, hi), 0.0, tol, degree=j).log_total
    return out


# ---------------------------------------------------------------- asymptotics


def delta_n(N: int) -> float:
    return math.log(N) / math.sqrt(N)


def high_start(e: HardWallEnsemble, M: float = DEFAULT_M) -> int:
    """m_N = ceil(N tau_star + M sqrt N)."""
    tau_star = equilibrium_measure(e).tau_star
    return int(math.ceil(e.N * tau_star + M * math.sqrt(e.N)))


def critical_window(e: HardWallEnsemble, M: float = DEFAULT_M) -> tuple[int, int]:
    """Inclusive degree range of the critical-window formula, rounded outward."""
    tau_star = equilibrium_measure(e).tau_star
    lo = int(math.floor(e.N * (tau_star - delta_n(e.N))))
    return max(lo, 0), high_start(e, M)


def window_tag(e: HardWallEnsemble, j: int, M: float = DEFAULT_M) -> str:
    lo, hi = critical_window(e, M)
    if j < lo:
        return "low"
    if j >= hi:
        return "high" if j > hi else "critical+high"
    return "critical"


def norm_asymptotic_high(e: HardWallEnsemble, j: int, M: float = DEFAULT_M) -> float:
    """Predicted log ||zeta^j||^2 for degrees well above N tau_star."""
    eq = equilibrium_measure(e)
    tau = j / e.N
    if j < high_start(e, M) or j >= e.N:
        raise DomainError(f"degree {j} is outside the high-degree window (M={M:g})")
    a, rs = e.alpha, e.rho_star
    return (
        math.log(2 * rs)
        + float(gammaln(a + 1))
        + (a + 1) * math.log(rs / (2 * e.N * (tau - eq.tau_star)))
        - e.N * v_tau(e.potential, tau, rs)
    )


def xi_tau(e: HardWallEnsemble, tau: float) -> float:
    eq = equilibrium_measure(e)
    lap = laplacian(e.potential, e.rho_star)
    return math.sqrt(e.N) * (eq.tau_star - tau) / (e.rho_star * math.sqrt(lap))


def norm_asymptotic_crit(e: HardWallEnsemble, j: int, M: float = DEFAULT_M) -> float:
    """Predicted log ||zeta^j||^2 for degrees near N tau_star."""
    lo, hi = critical_window(e, M)
    if not lo <= j <= hi or j < 1:
        raise DomainError(f"degree {j} is outside the critical window [{lo}, {hi}]")
    tau = j / e.N
    p, a, N = e.potential, e.alpha, e.N
    rho0, _ = droplet_radii(p)
    r_tau = _smallest_crossing(p, 2 * tau, lo=rho0)
    lap = laplacian(p, e.rho_star)
    log_c = math.log(2 * e.rho_star) - 0.5 * (a + 1) * math.log(4 * lap)
    return (
        log_c
        - 0.5 * (a + 1) * math.log(N)
        - N * v_tau(p, tau, r_tau)
        + log_phi_alpha(a, xi_tau(e, tau))
    )
