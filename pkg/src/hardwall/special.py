"""Incomplete gamma functions, erfc and the critical-window profile phi_alpha."""

from __future__ import annotations

import math

import numpy as np
from scipy import special as sc

from .errors import DomainError, QuadratureError
from .quadrature import integrate_log_singular

_EPS = 1e-16
_TINY = 1e-300
_MAX_TERMS = 10_000


def _series_lower(a, x):
    # regularised P(a, x) by the power series, valid for x < a + 1
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_TERMS):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    else:
        raise QuadratureError("incomplete gamma series did not converge")
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _cf_upper(a, x):
    # regularised Q(a, x) by Lentz's continued fraction, valid for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_TERMS):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    else:
        raise QuadratureError("incomplete gamma continued fraction did not converge")
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def _regularized_pair(a, x):
    if a <= 0:
        raise DomainError("incomplete gamma needs a > 0")
    if x < 0 or math.isnan(x):
        raise DomainError("incomplete gamma needs x >= 0")
    if x == 0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    if x < a + 1.0:
        p = _series_lower(a, x)
        return p, 1.0 - p
    q = _cf_upper(a, x)
    return 1.0 - q, q


def _lower_scalar(a, x):
    p, q = _regularized_pair(float(a), float(x))
    return p * math.gamma(a)


def _upper_scalar(a, x):
    p, q = _regularized_pair(float(a), float(x))
    return q * math.gamma(a)


_lower_vec = np.vectorize(_lower_scalar, otypes=[float])
_upper_vec = np.vectorize(_upper_scalar, otypes=[float])


def lower_inc_gamma(a, x):
    """gamma(a, x) = int_0^x t^(a-1) e^(-t) dt (not regularised)."""
    out = _lower_vec(a, x)
    return out if out.ndim else float(out)


def upper_inc_gamma(a, x):
    """Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt (not regularised)."""
    out = _upper_vec(a, x)
    return out if out.ndim else float(out)


def erfc_eval(x):
    """Complementary error function; complex arguments allowed."""
    out = sc.erfc(x)
    return out if np.ndim(out) else out[()]


def _log_phi_scalar(alpha, xi):
    # int_0^S s^alpha exp(-(s - xi)^2 / 2) ds with s = S - r, so the s^alpha
    # endpoint becomes the (hi - r)^alpha wall weight of the quadrature engine
    span = max(xi, 0.0) + 40.0
    res = integrate_log_singular(lambda r: -0.5 * (span - r - xi) ** 2, (0.0, span), alpha, tol=1e-13)
    return res.log_value


_log_phi_vec = np.vectorize(_log_phi_scalar, otypes=[float])


def log_phi_alpha(alpha: float, xi):
    if not alpha > -1:
        raise DomainError("phi_alpha needs alpha > -1")
    out = _log_phi_vec(alpha, xi)
    return out if out.ndim else float(out)


def phi_alpha(alpha: float, xi):
    """phi_alpha(xi) = int_0^inf s^alpha exp(-(s - xi)^2 / 2) ds."""
    return np.exp(log_phi_alpha(alpha, xi))
