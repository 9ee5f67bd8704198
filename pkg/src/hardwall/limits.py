"""Limiting and reference kernels near a hard wall.

Laplace-type kernels on the right half-plane:
    K_f(z, w) = (2 Re z)^{a/2} (2 Re w)^{a/2} int f(t) exp(-t (z + conj w)) dt,
with K^(a) the case f(t) = t^{a+1} / Gamma(a+1) on (0, 1).  Also the
Ginibre kernel, the plasma functions F and H, the mass-one identity and the
rescaled Ward equation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.special import gammaln, roots_jacobi

from .errors import DomainError
from .special import erfc_eval, upper_inc_gamma

_SMALL_C = 40.0
_ASYM_TERMS = 30
_QUAD = dict(epsabs=0.0, epsrel=1e-13, limit=400)


# ------------------------------------------------------------------ K^(alpha)


@lru_cache(maxsize=None)
def _jacobi_unit(beta: float, n: int = 64):
    # nodes/weights for int_0^1 t^beta g(t) dt
    x, w = roots_jacobi(n, 0.0, beta)
    return 0.5 * (x + 1.0), w * 2.0 ** (-beta - 1.0)


def unit_laplace(beta: float, c):
    """J(c) = int_0^1 t^beta exp(-t c) dt for Re c >= 0, vectorised."""
    c = np.asarray(c, dtype=complex)
    out = np.empty(c.shape, dtype=complex)
    small = np.abs(c) <= _SMALL_C
    if np.any(small):
        t, w = _jacobi_unit(float(beta))
        cs = c[small]
        out[small] = np.exp(-np.multiply.outer(cs, t)) @ w
    if np.any(~small):
        cb = c[~small]
        term = 1.0 / cb
        acc = term.copy()
        for k in range(1, _ASYM_TERMS):
            term = term * (beta - k + 1) / cb
            acc = acc + term
        out[~small] = math.gamma(beta + 1.0) * cb ** (-beta - 1.0) - np.exp(-cb) * acc
    return out


def _check_half_plane(*pts):
    for p in pts:
        if np.any(np.real(np.asarray(p)) <= 0):
            raise DomainError("limit kernels are defined for Re z > 0 only")


def _prefactor(alpha, z, w):
    return (2 * np.real(z)) ** (alpha / 2) * (2 * np.real(w)) ** (alpha / 2)


def _out(x):
    x = np.asarray(x)
    return complex(x) if x.ndim == 0 else x


def k_alpha(alpha: float, z, w):
    """K^(alpha)(z, w)."""
    if not alpha > -1:
        raise DomainError("alpha must exceed -1")
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    _check_half_plane(z, w)
    c = z + np.conj(w)
    return _out(_prefactor(alpha, z, w) * unit_laplace(alpha + 1.0, c) / math.gamma(alpha + 1.0))


def k_alpha_diag_closed(x):
    """K^(0)(x, x) = (1 - e^{-2x}(1 + 2x)) / (4 x^2)."""
    x = np.asarray(x, dtype=float)
    return -np.expm1(-2 * x) / (4 * x * x) - np.exp(-2 * x) * 2 * x / (4 * x * x)


def half_line_mass(alpha: float) -> float:
    """int_0^inf K^(alpha)(x, x) dx (equals 1/2)."""
    g = lambda x: float(np.real(k_alpha(alpha, x, x)))
    a, _ = integrate.quad(g, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12, limit=200)
    b, _ = integrate.quad(g, 1.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=200)
    return a + b


# ------------------------------------------------------------ general K_f


@dataclass(frozen=True)
class LaplaceKernelSpec:
    alpha: float
    f: Callable[[float], float]
    support: tuple[float, float]
    breaks: tuple[float, ...] = ()
    # when set, f = t^{a+1} / Gamma(a+1) on this union of intervals, enabling closed forms
    canonical_set: tuple[tuple[float, float], ...] | None = None
    label: str = "f"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.alpha > -1:
            raise DomainError("alpha must exceed -1")
        lo, hi = self.support
        if not (0 <= lo < hi):
            raise DomainError("support must be an interval inside (0, inf)")

    def pieces(self):
        lo, hi = self.support
        pts = sorted({lo, hi, *[b for b in self.breaks if lo < b < hi]})
        return list(zip(pts[:-1], pts[1:]))


def canonical_spec(alpha: float, intervals: Sequence[tuple[float, float]] = ((0.0, 1.0,),)) -> LaplaceKernelSpec:
    """f(t) = t^{a+1} / Gamma(a+1) on a finite union of disjoint intervals."""
    iv = tuple(sorted((float(a), float(b)) for a, b in intervals))
    if any(a < 0 or b <= a for a, b in iv) or any(iv[i][1] > iv[i + 1][0] for i in range(len(iv) - 1)):
        raise DomainError("intervals must be disjoint, ordered and inside [0, inf)")
    g = math.gamma(alpha + 1.0)

    def f(t):
        t = np.asarray(t, dtype=float)
        inside = np.zeros(t.shape, dtype=bool)
        for a, b in iv:
            inside |= (t > a) & (t < b)
        return np.where(inside, t ** (alpha + 1.0) / g, 0.0)

    edges = tuple(x for ab in iv for x in ab)
    return LaplaceKernelSpec(
        alpha=alpha,
        f=f,
        support=(iv[0][0], iv[-1][1]),
        breaks=edges,
        canonical_set=iv,
        label=f"canonical{iv}",
    )


def power_spec(alpha: float, coef: float, power: float, hi: float) -> LaplaceKernelSpec:
    """f(t) = coef * t^power on (0, hi); used for counterexamples."""
    return LaplaceKernelSpec(
        alpha=alpha,
        f=lambda t: coef * np.asarray(t, dtype=float) ** power,
        support=(0.0, float(hi)),
        label=f"{coef:g}*t^{power:g} on (0,{hi:g})",
    )


def _quad_pieces(fn, spec, complex_func=False):
    total = 0.0
    for a, b in spec.pieces():
        val, _ = integrate.quad(fn, a, b, complex_func=complex_func, **_QUAD)
        total += val
    return total


def k_f(spec: LaplaceKernelSpec, z, w):
    """K_f(z, w) by adaptive quadrature over the support of f."""
    _check_half_plane(z, w)

    def one(zz, ww):
        c = zz + np.conj(ww)
        with warnings.catch_warnings():
            # oscillatory cases report roundoff at epsrel 1e-13; accuracy is tested against k_alpha
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val = _quad_pieces(lambda t: complex(spec.f(t)) * np.exp(-t * c), spec, complex_func=True)
        return complex(_prefactor(spec.alpha, zz, ww) * val)

    res = np.vectorize(one, otypes=[complex])(np.asarray(z, dtype=complex), np.asarray(w, dtype=complex))
    return _out(res)


def laplace_f(spec: LaplaceKernelSpec, c, n_panels: int = 64, n_nodes: int = 16):
    """int f(t) e^{-tc} dt, vectorised over c (closed form for canonical f)."""
    c = np.asarray(c, dtype=complex)
    if spec.canonical_set is not None:
        beta = spec.alpha + 1.0
        out = np.zeros(c.shape, dtype=complex)
        for a, b in spec.canonical_set:
            out += b ** (beta + 1.0) * unit_laplace(beta, b * c)
            if a > 0:
                out -= a ** (beta + 1.0) * unit_laplace(beta, a * c)
        return out / math.gamma(spec.alpha + 1.0)
    x, wts = np.polynomial.legendre.leggauss(n_nodes)
    out = np.zeros(c.shape, dtype=complex)
    for a, b in spec.pieces():
        edges = np.linspace(a, b, n_panels + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1:] - edges[:-1])
        t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        wt = (half[:, None] * wts[None, :]).ravel() * spec.f(t)
        out += np.exp(-np.multiply.outer(c, t)) @ wt
    return out


def k_f_fast(spec: LaplaceKernelSpec, z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return _prefactor(spec.alpha, z, w) * laplace_f(spec, z + np.conj(w))


# ------------------------------------------------------- Ginibre and plasma


def ginibre_kernel(z, w):
    """G(z, w) = exp(z conj(w) - |z|^2/2 - |w|^2/2)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return _out(np.exp(z * np.conj(w) - 0.5 * np.abs(z) ** 2 - 0.5 * np.abs(w) ** 2))


def plasma_F(z):
    """F(z) = erfc(z / sqrt 2) / 2."""
    return 0.5 * erfc_eval(np.asarray(z, dtype=complex) / math.sqrt(2.0))


@lru_cache(maxsize=None)
def _legendre_panels(lo: float, hi: float, panels: int = 48, nodes: int = 24):
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(lo, hi, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def plasma_H(z, cutoff: float = 12.0):
    """H(z) = (2 pi)^{-1/2} int_{-inf}^0 exp(-(z - t)^2 / 2) / F(t) dt for Re z <= 0."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.real(z) > 0):
        raise DomainError("H is defined for Re z <= 0")

    def one(zz):
        t, w = _legendre_panels(float(np.real(zz)) - cutoff, 0.0)
        vals = np.exp(-0.5 * (zz - t) ** 2) / np.real(plasma_F(t))
        return complex(np.sum(w * vals) / math.sqrt(2 * math.pi))

    return _out(np.vectorize(one, otypes=[complex])(z))


def kernel_free(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return _out(ginibre_kernel(z, w) * plasma_F(z + np.conj(w)))


def kernel_hard(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(np.real(z) > 0) or np.any(np.real(w) > 0):
        raise DomainError("hard-edge kernel is defined for Re z, Re w <= 0")
    return _out(ginibre_kernel(z, w) * plasma_H(z + np.conj(w)))


# ------------------------------------------------------------- mass-one


def one_point(spec: LaplaceKernelSpec, x: float) -> float:
    """R(x) = K_f(x, x)."""
    if not x > 0:
        raise DomainError("x must be positive")
    if spec.canonical_set is not None:
        return float(np.real(k_f_fast(spec, x, x)))
    val = _quad_pieces(lambda t: float(spec.f(t)) * math.exp(-2 * x * t), spec)
    return (2 * x) ** spec.alpha * val


def mass_one_reduced(spec: LaplaceKernelSpec, x: float) -> float:
    """int |K_f(x, w)|^2 dA(w) - K_f(x, x) after the w-integration is done by hand."""
    a = spec.alpha
    lg = math.lgamma(a + 1.0)

    def squared(s):
        fs = float(spec.f(s))
        return 0.0 if fs == 0.0 else math.exp(-2 * x * s + lg - (a + 1) * math.log(s)) * fs * fs

    # the two terms are integrated separately: for admissible f their
    # difference is pure roundoff and a relative tolerance could never be met
    mass = _quad_pieces(squared, spec)
    diag = _quad_pieces(lambda s: float(spec.f(s)) * math.exp(-2 * x * s), spec)
    return (2 * x) ** a * (mass - diag)


def _u_rule(alpha: float, u_max: float = 1.6e4):
    # int_0^u_max (2u)^alpha g(u) du: Jacobi on (0, 1), geometric Legendre beyond
    t, w = _jacobi_unit(float(alpha), 40)
    nodes = [t]
    weights = [w * 2.0**alpha]
    x, wl = np.polynomial.legendre.leggauss(24)
    lo = 1.0
    while lo < u_max:
        hi = lo * 1.5
        u = 0.5 * (hi + lo) + 0.5 * (hi - lo) * x
        nodes.append(u)
        weights.append(0.5 * (hi - lo) * wl * (2 * u) ** alpha)
        lo = hi
    return np.concatenate(nodes), np.concatenate(weights)


def _v_rule(v_max: float):
    # half-line rule for an even integrand in v; dense near the origin
    x, wl = np.polynomial.legendre.leggauss(12)
    edges = list(np.arange(0.0, min(200.0, v_max), 1.0))
    v = 200.0
    while v < v_max:
        edges.append(v)
        v *= 1.2
    edges.append(v_max)
    edges = np.unique(edges)
    a, b = edges[:-1], edges[1:]
    nodes = (0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * x).ravel()
    wts = (0.5 * (b - a)[:, None] * wl).ravel()
    return nodes, wts


@dataclass(frozen=True)
class MassOneReport:
    x: float
    reduced: float
    direct: float
    tail_estimate: float
    flagged: bool


def mass_one_direct(spec: LaplaceKernelSpec, x: float, v_max: float = 2000.0) -> tuple[float, float]:
    """Truncated 2D quadrature of int |K_f(x, w)|^2 dA(w) - K_f(x, x).

    Returns (residual, tail estimate).  Beyond |v| = v_max the integrand
    decays like 1/v^2, so the tail is closed with v_max times the boundary
    values and added to the truncated sum.
    """
    a = spec.alpha
    u, wu = _u_rule(a)
    v, wv = _v_rule(v_max)
    total = 0.0
    for k in range(u.size):
        lap = laplace_f(spec, x + u[k] - 1j * v)
        total += wu[k] * np.sum(wv * np.abs(lap) ** 2)
    edge = np.abs(laplace_f(spec, x + u - 1j * v_max)) ** 2
    tail = float(np.sum(wu * edge)) * v_max
    # even in v (factor 2), dA = du dv / pi, wall factor (2x)^a
    scale = 2.0 / math.pi * (2 * x) ** a
    raw = scale * total
    return raw + scale * tail - one_point(spec, x), scale * tail


def mass_one_residual(spec: LaplaceKernelSpec, z, direct: bool = True, tol: float = 1e-3) -> MassOneReport:
    z = complex(z)
    if not z.real > 0:
        raise DomainError("mass-one check needs Re z > 0")
    x = z.real  # both sides depend on Re z only
    red = mass_one_reduced(spec, x)
    if not direct:
        return MassOneReport(x, red, float("nan"), float("nan"), False)
    d, tail = mass_one_direct(spec, x)
    return MassOneReport(x, red, d, tail, bool(tail > tol))


# ------------------------------------------------------------- Ward


def _G_factory(spec: LaplaceKernelSpec):
    """G(t) = Gamma(a+1) int_0^t f(s) s^{-(a+1)} ds."""
    a = spec.alpha
    if spec.canonical_set is not None:
        iv = np.array(spec.canonical_set)
        return lambda t: float(np.sum(np.clip(np.minimum(iv[:, 1], t) - iv[:, 0], 0.0, None)))
    lg = math.lgamma(a + 1.0)
    lo = spec.support[0]

    def G(t):
        if t <= lo:
            return 0.0
        val, _ = integrate.quad(
            lambda s: float(spec.f(s)) * math.exp(lg - (a + 1) * math.log(s)), lo, t, **_QUAD
        )
        return val

    return G


def cauchy_transform(spec: LaplaceKernelSpec, z) -> complex:
    """C(z) = int B(z, w) / (z - w) dA(w), reduced to one-dimensional integrals.

    C = L2/R - L1/R with L1/R = int f(s) s^{-(a+1)} Gamma(a+1, 2xs) ds and
    L2 = (2x)^a int f(t) e^{-2xt} G(t) dt.  It is real and depends on Re z only.
    """
    z = complex(z)
    if not z.real > 0:
        raise DomainError("Cauchy transform needs Re z > 0")
    x = z.real
    a = spec.alpha
    R = one_point(spec, x)
    if not R > 1e-300:
        raise DomainError("R(x) underflows; log R is undefined numerically")
    G = _G_factory(spec)

    def l1(s):
        fs = float(spec.f(s))
        return 0.0 if fs == 0.0 else fs * s ** (-(a + 1)) * upper_inc_gamma(a + 1.0, 2 * x * s)

    def l2(t):
        ft = float(spec.f(t))
        return 0.0 if ft == 0.0 else ft * math.exp(-2 * x * t) * G(t)

    L1_over_R = _quad_pieces(l1, spec)
    L2 = (2 * x) ** a * _quad_pieces(l2, spec)
    return complex(L2 / R - L1_over_R, 0.0)


def _d1(fn, x, h):
    D = lambda s: (fn(x + s) - fn(x - s)) / (2 * s)
    return (4 * D(h / 2) - D(h)) / 3


def _d2(fn, x, h):
    f0 = fn(x)
    D = lambda s: (fn(x + s) - 2 * f0 + fn(x - s)) / (s * s)
    return (4 * D(h / 2) - D(h)) / 3


@dataclass(frozen=True)
class WardReport:
    grid: np.ndarray
    R: np.ndarray
    C: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    residual: np.ndarray
    max_residual: float
    include_wall_charge: bool


def _ward_parts(spec, x, step, include_wall_charge):
    C = lambda s: cauchy_transform(spec, s).real
    logR = lambda s: math.log(one_point(spec, s))
    R = one_point(spec, x)
    lhs = 0.5 * _d1(C, x, step)
    rhs = R - 0.25 * _d2(logR, x, step)
    if include_wall_charge:
        # Delta log (2x)^a = -a / (4 x^2)
        rhs -= spec.alpha / (4 * x * x)
    return R, C(x), lhs, rhs


def ward_residual(spec: LaplaceKernelSpec, x: float, step: float = 1e-3, include_wall_charge: bool = False) -> float:
    """d-bar C - (R - Delta log R) at the real point x, by finite differences.

    With include_wall_charge the (2x)^alpha factor of R is removed before taking
    Delta log, which is the form that holds for alpha != 0.
    """
    if not x > step:
        raise DomainError("x must exceed the finite-difference step")
    _, _, lhs, rhs = _ward_parts(spec, x, step, include_wall_charge)
    return lhs - rhs


def ward_report(spec: LaplaceKernelSpec, grid, step: float = 1e-3, include_wall_charge: bool = False) -> WardReport:
    grid = np.asarray(grid, dtype=float)
    parts = np.array([_ward_parts(spec, float(x), step, include_wall_charge) for x in grid])
    R, C, lhs, rhs = parts.T
    res = lhs - rhs
    return WardReport(grid, R, C, lhs, rhs, res, float(np.max(np.abs(res))), include_wall_charge)


def cauchy_direct(spec: LaplaceKernelSpec, x: float, v_max: float = 400.0) -> complex:
    """Spot-check of C(x) by 2D quadrature of B(x, w)/(x - w) over the half-plane.

    A square of half-width x/2 around x is handled by subtracting B(x, x)/(x - w),
    whose integral over the square vanishes by symmetry.
    """
    a = spec.alpha
    R = one_point(spec, x)
    s = 0.5 * x

    def B(u, v):
        return (2 * x) ** a * (2 * u) ** a * np.abs(laplace_f(spec, x + u - 1j * v)) ** 2 / R

    xg, wg = np.polynomial.legendre.leggauss(16)

    def graded(lo, hi, toward_lo, levels=30):
        # panels shrinking geometrically toward one end
        width = hi - lo
        cuts = [width * 2.0 ** -k for k in range(levels)] + [0.0]
        cuts = np.array(cuts[::-1])
        e = lo + cuts if toward_lo else hi - cuts
        e = np.sort(e)
        A, Bd = e[:-1], e[1:]
        n = (0.5 * (A + Bd)[:, None] + 0.5 * (Bd - A)[:, None] * xg).ravel()
        w = (0.5 * (Bd - A)[:, None] * wg).ravel()
        return n, w

    def plain(edges):
        edges = np.asarray(edges, dtype=float)
        A, Bd = edges[:-1], edges[1:]
        n = (0.5 * (A + Bd)[:, None] + 0.5 * (Bd - A)[:, None] * xg).ravel()
        w = (0.5 * (Bd - A)[:, None] * wg).ravel()
        return n, w

    # u: (0, x-s) with wall weight, [x-s, x+s] graded at x, then outward
    tj, wj = _jacobi_unit(float(a), 40)
    u_wall = tj * (x - s)
    w_wall = wj * (x - s) ** (a + 1) * 2.0**a
    u1, w1 = graded(x - s, x, toward_lo=False)
    u2, w2 = graded(x, x + s, toward_lo=True)
    outer_edges = [x + s]
    while outer_edges[-1] < 2e3:
        outer_edges.append(outer_edges[-1] * 1.3)
    u3, w3 = plain(outer_edges)
    u_in = np.concatenate([u1, u2])
    w_in = np.concatenate([w1, w2]) * (2 * u_in) ** a
    u_out = np.concatenate([u3])
    w_out = w3 * (2 * u_out) ** a

    v1, wv1 = graded(0.0, s, toward_lo=True)
    v_edges = [s]
    while v_edges[-1] < v_max:
        v_edges.append(min(v_edges[-1] + max(1.0, 0.2 * v_edges[-1]), v_max))
    v2, wv2 = plain(v_edges)

    def block(u, wu, v, wv, subtract):
        U, V = np.meshgrid(u, v, indexing="ij")
        with np.errstate(divide="ignore", invalid="ignore"):
            val = B(U, V)
            if subtract:
                val = val - R  # B(x, x) = R
            val = val * (2 * U) ** (-a)
            kern = (x - U) / ((x - U) ** 2 + V**2)
        return float(np.sum(wu[:, None] * wv[None, :] * np.nan_to_num(val * kern)))

    total = 0.0
    # wall strip (u < x - s): weights include (2u)^a, so divide it back out in B
    total += block(u_wall, w_wall, np.concatenate([v1, v2]), np.concatenate([wv1, wv2]), False)
    total += block(u_in, w_in, v1, wv1, True)
    total += block(u_in, w_in, v2, wv2, False)
    total += block(u_out, w_out, np.concatenate([v1, v2]), np.concatenate([wv1, wv2]), False)
    # even in v, dA = du dv / pi
    return complex(2.0 * total / math.pi, 0.0)
