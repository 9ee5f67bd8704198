import math
import warnings

import numpy as np
import pytest
from scipy.special import gammainc, gammaincc

from hardwall.errors import DomainError
from hardwall.extremes import (
    a_n_const,
    i_n,
    log_tail_masses,
    max_modulus_cdf,
    max_modulus_law,
    omega_law,
    tail_mass,
    weibull_cdf,
    weibull_sup_error,
)
from hardwall.potential import HardWallEnsemble, ginibre


def test_tail_mass_closed_form(ctx_factory):
    ctx = ctx_factory(50)
    for j in (0, 20, 49):
        for r in (0.3, 0.7, 0.79):
            ref = (gammaincc(j + 1, 50 * r * r) - gammaincc(j + 1, 50 * 0.64)) / gammainc(j + 1, 50 * 0.64)
            assert tail_mass(ctx, j, r) == pytest.approx(ref, rel=1e-9, abs=1e-300)


def test_heads_and_tails_sum_to_one(ctx_factory):
    ctx = ctx_factory(30, 1.0)
    lh, lt = log_tail_masses(ctx, [0.2, 0.5, 0.75])
    assert np.allclose(np.exp(lh) + np.exp(lt), 1.0, atol=1e-12)


def test_cdf_endpoints(ctx_factory):
    ctx = ctx_factory(20)
    assert max_modulus_cdf(ctx, 0.8) == pytest.approx(1.0)
    with pytest.warns(RuntimeWarning):
        assert max_modulus_cdf(ctx, 0.0) == 0.0
    with pytest.raises(DomainError):
        max_modulus_cdf(ctx, 0.9)


def test_cdf_matches_ginibre_product(ctx_factory):
    ctx = ctx_factory(40)
    r = 0.77
    ref = np.prod(gammainc(np.arange(40) + 1, 40 * r * r) / gammainc(np.arange(40) + 1, 40 * 0.64))
    assert max_modulus_cdf(ctx, r) == pytest.approx(ref, rel=1e-9)


def test_a_n_example():
    e = HardWallEnsemble(ginibre(), 0.8, 0.0, 100)
    g = 0.8 / 36
    assert a_n_const(e) == pytest.approx(0.5 * g**2 * 2 / 0.8, rel=1e-13)
    e1 = HardWallEnsemble(ginibre(), 0.8, 1.0, 100)
    assert a_n_const(e1) == pytest.approx(0.5 * g**1.5 * math.sqrt(6 / 0.8), rel=1e-13)


def test_weibull():
    assert weibull_cdf(0.0, 1.0) == pytest.approx(1 - math.exp(-1))
    assert weibull_cdf(1.0, 0.0) == 0.0
    with pytest.raises(DomainError):
        weibull_cdf(0.0, -1.0)


def test_law_consistency(ctx_factory):
    law = max_modulus_law(ctx_factory(125))
    gap = law.consistency_gap()[1:]
    bound = law.consistency_bound()[1:]
    assert np.all(gap <= bound * (1 + 1e-9) + 1e-14)
    assert law.cdf.is_monotone()


def test_i_n_increasing(ctx_factory):
    ctx = ctx_factory(125)
    v = i_n(ctx, np.array([0.5, 1.0, 2.0]))
    assert np.all(np.diff(v) > 0)
    assert i_n(ctx, 0.0) == 0.0


def test_weibull_error_decreases(ctx_factory):
    e1 = weibull_sup_error(ctx_factory(60))
    e2 = weibull_sup_error(ctx_factory(120))
    assert e2 < e1


def test_omega_domain(ctx_factory):
    ctx = ctx_factory(20)
    with pytest.raises(DomainError):
        omega_law(ctx, [-1.0])
    with pytest.raises(DomainError):
        omega_law(ctx, [1e9])
