"""Exact sampling of the radial ensemble.

For a radially symmetric determinantal ensemble the moduli are independent,
the j-th one with density proportional to 2 r^{2j+1} (rho_star - r)^alpha
e^{h(r)} e^{-N q(r)} on (0, rho_star), and the angles are uniform.  Each
modulus is drawn by inverting its tabulated CDF.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, QuadratureError
from .extremes import a_n_const, omega_law
from .kernel import KernelContext
from .norms import degree_log_integrand, degree_panels
from .tables import CdfTable, RadialInverse

_NORM_MATCH = 1e-8


def _drop_point(log_f, peak, end, drop):
    """Point between peak and end where log_f has fallen by ``drop`` (end if it never does)."""
    target = log_f(peak) - drop
    if not log_f(end) < target:
        return end
    return brentq(lambda r: log_f(r) - target, min(peak, end), max(peak, end), xtol=1e-14)


def _nodes_for_degree(ctx: KernelContext, j: int, n: int) -> np.ndarray:
    e = ctx.ensemble
    hi = e.rho_star
    lg = degree_log_integrand(e, j)

    def log_f(r):
        r = float(r)
        if r <= 0:
            return -np.inf
        extra = e.alpha * math.log(hi - r) if (e.alpha != 0 and r < hi) else 0.0
        return float(lg(np.array([r]))[0]) + extra

    # radial density is unimodal in the bulk; locate the mode on a coarse grid
    grid = np.linspace(0.0, hi, 2049)[1:-1]
    with np.errstate(divide="ignore"):
        vals = lg(grid) + (e.alpha * np.log(hi - grid) if e.alpha != 0 else 0.0)
    peak = float(grid[int(np.argmax(vals))])
    left = _drop_point(log_f, peak, grid[0], 45.0)
    right = _drop_point(log_f, peak, grid[-1], 45.0)
    k = n // 4
    uniform = np.linspace(0.0, hi, k + 1)[1:-1]
    core = np.linspace(left, right, 2 * k)
    wall = hi - hi * np.geomspace(1e-14, 1.0, k)[:-1]
    nodes = np.unique(np.concatenate([uniform, core, wall]))
    return nodes[(nodes > 0) & (nodes < hi)]


def _table_for_degree(ctx: KernelContext, j: int, n: int, tol: float) -> CdfTable:
    e = ctx.ensemble
    norm = ctx.norms.log_norms[j]
    for attempt, size in enumerate((n, 2 * n)):
        nodes = _nodes_for_degree(ctx, j, size)
        ps = degree_panels(e, j, tol, cuts=nodes)
        lh = ps.log_heads(nodes) - norm
        ls = ps.log_tails(nodes) - norm
        values = np.exp(lh)
        consistent = abs(ps.log_total - norm) <= _NORM_MATCH
        if consistent and np.all(np.diff(values) >= 0):
            return CdfTable(
                nodes=nodes,
                values=values,
                degree=j,
                lo=0.0,
                hi=e.rho_star,
                log_head=lh,
                log_survival=ls,
            )
    raise QuadratureError("radial CDF table is not monotone or does not match the norm table", degree=j)


def build_radial_cdfs(ctx: KernelContext, nodes_per_degree: int = 4096, tol: float = 1e-10, threads: int = 1):
    """One CdfTable per degree j = 0..N-1."""
    one = lambda j: _table_for_degree(ctx, j, nodes_per_degree, tol)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, range(ctx.N)))
    return [one(j) for j in range(ctx.N)]


@dataclass(frozen=True)
class SamplerTables:
    tables: list
    inverses: list
    rho_star: float
    alpha: float

    @property
    def N(self) -> int:
        return len(self.tables)


def prepare(ctx: KernelContext, nodes_per_degree: int = 4096, threads: int = 1) -> SamplerTables:
    tabs = build_radial_cdfs(ctx, nodes_per_degree, threads=threads)
    a = ctx.ensemble.alpha
    inv = [RadialInverse.from_table(t, head_power=2 * j + 2, wall_power=a + 1) for j, t in enumerate(tabs)]
    return SamplerTables(tabs, inv, ctx.ensemble.rho_star, a)


@dataclass(frozen=True)
class SampleBatch:
    seed: int
    configs: np.ndarray
    count: int


def _stream(seed: int, index: int) -> np.random.Generator:
    # 128-bit Philox key: seed in the high word, configuration index in the low word
    if not 0 <= seed < 2**64 or not 0 <= index < 2**64:
        raise DomainError("seed and configuration index must be 64-bit unsigned integers")
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | int(index)))


def _draw(st: SamplerTables, seed: int, indices) -> np.ndarray:
    n = st.N
    u = np.empty((len(indices), n))
    theta = np.empty((len(indices), n))
    for row, idx in enumerate(indices):
        g = _stream(seed, idx)
        u[row] = g.random(n)
        theta[row] = g.random(n) * 2.0 * math.pi
    radii = np.empty_like(u)
    for j, inv in enumerate(st.inverses):
        radii[:, j] = inv(u[:, j])
    radii = np.clip(radii, 0.0, np.nextafter(st.rho_star, 0.0))
    return radii * np.exp(1j * theta)


def sample_configuration(st: SamplerTables, rng_seed: int, config_index: int = 0) -> np.ndarray:
    """N points; identical for identical (seed, index)."""
    return _draw(st, rng_seed, [config_index])[0]


def sample_batch(st: SamplerTables, seed: int, count: int, threads: int = 1) -> SampleBatch:
    if count < 1:
        raise DomainError("count must be positive")
    if threads > 1:
        chunks = np.array_split(np.arange(count), threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _draw(st, seed, c), chunks))
        configs = np.concatenate(parts)
    else:
        configs = _draw(st, seed, range(count))
    return SampleBatch(seed=seed, configs=configs, count=count)


def empirical_max_modulus(batch: SampleBatch, rho_star: float, a_n: float) -> tuple[np.ndarray, np.ndarray]:
    """Sorted omega = (rho_star - max |zeta|) / a_N and the step CDF heights i/n."""
    if batch.count < 1:
        raise DomainError("empty batch")
    omega = np.sort((rho_star - np.max(np.abs(batch.configs), axis=1)) / a_n)
    return omega, np.arange(1, omega.size + 1) / omega.size


def ks_statistic(sorted_sample: np.ndarray, cdf_at_sample: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance between a sorted sample and a continuous CDF."""
    n = sorted_sample.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf_at_sample), np.max(cdf_at_sample - (i - 1) / n)))


def ks_critical_95(n: int) -> float:
    return 1.36 / math.sqrt(n)


def max_modulus_ks(ctx: KernelContext, batch: SampleBatch) -> float:
    """KS distance between the sampled omega_N and the exact product law."""
    a_n = a_n_const(ctx.ensemble)
    omega, _ = empirical_max_modulus(batch, ctx.ensemble.rho_star, a_n)
    xs, inverse = np.unique(omega, return_inverse=True)
    _, p, _, _ = omega_law(ctx, xs)
    return ks_statistic(omega, p[inverse])
