import numpy as np
import pytest

from hardwall.errors import DomainError
from hardwall.extremes import max_modulus_cdf
from hardwall.sampler import (
    _stream,
    empirical_max_modulus,
    ks_critical_95,
    ks_statistic,
    max_modulus_ks,
    prepare,
    sample_batch,
    sample_configuration,
)


@pytest.fixture(scope="module")
def tables():
    from conftest import ginibre_ctx

    ctx = ginibre_ctx(30)
    return ctx, prepare(ctx, nodes_per_degree=1024)


def test_tables_monotone_and_normalised(tables):
    _, st = tables
    for t in st.tables:
        assert t.is_monotone()
        assert t.values[-1] == pytest.approx(1.0, abs=1e-6)


def test_inverse_matches_cdf(tables):
    _, st = tables
    u = np.linspace(0.01, 0.99, 33)
    for j in (0, 15, 29):
        r = st.inverses[j](u)
        assert np.allclose(st.tables[j](r), u, atol=1e-5)


def test_reproducible(tables):
    _, st = tables
    a = sample_configuration(st, 7, 3)
    b = sample_configuration(st, 7, 3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_configuration(st, 7, 4))
    batch = sample_batch(st, 7, 5)
    assert np.array_equal(batch.configs[3], a)
    assert np.array_equal(sample_batch(st, 7, 5, threads=3).configs, batch.configs)


def test_points_inside_wall(tables):
    _, st = tables
    b = sample_batch(st, 1, 50)
    assert b.configs.shape == (50, 30)
    assert np.all(np.abs(b.configs) < 0.8)


def test_streams_distinct_and_checked():
    x = _stream(1, 0).random(4)
    y = _stream(0, 1).random(4)
    assert not np.array_equal(x, y)
    with pytest.raises(DomainError):
        _stream(-1, 0)
    with pytest.raises(DomainError):
        _stream(2**64, 0)


def test_ks_helpers():
    s = np.array([0.1, 0.4, 0.8])
    assert ks_statistic(s, s) == pytest.approx(max(1 / 3 - 0.1, 0.8 - 2 / 3, 0.4 - 1 / 3, 2 / 3 - 0.4, 1 - 0.8, 0.1))
    assert ks_critical_95(2000) == pytest.approx(0.0304, abs=1e-4)


def test_empirical_law_agrees(tables):
    ctx, st = tables
    batch = sample_batch(st, 11, 1500)
    assert max_modulus_ks(ctx, batch) < ks_critical_95(1500) * 1.5
    # radial CDF check at a fixed radius
    frac = np.mean(np.max(np.abs(batch.configs), axis=1) <= 0.75)
    assert frac == pytest.approx(max_modulus_cdf(ctx, 0.75), abs=0.05)
    with pytest.raises(DomainError):
        sample_batch(st, 0, 0)


def test_empirical_max_modulus_shapes(tables):
    _, st = tables
    b = sample_batch(st, 2, 10)
    om, h = empirical_max_modulus(b, 0.8, 0.01)
    assert np.all(np.diff(om) >= 0) and h[-1] == 1.0


@pytest.fixture(scope="module")
def tables100():
    from conftest import ginibre_ctx

    ctx = ginibre_ctx(100)
    return ctx, prepare(ctx)


def test_cdf_normalisation_and_oracle(tables100):
    from scipy.special import gammainc

    ctx, st = tables100
    for j in (0, 40, 64, 99):
        t = st.tables[j]
        assert t(0.8 - 1e-15) == pytest.approx(1.0, abs=1e-9)
        r = np.array([0.3, 0.6, 0.75, 0.79])
        ref = gammainc(j + 1, 100 * r * r) / gammainc(j + 1, 64.0)
        assert np.allclose(t(r), ref, atol=1e-8)


def test_top_degree_median(tables100):
    from hardwall.equilibrium import rho_tau
    from hardwall.potential import ginibre

    _, st = tables100
    # rho_tau(0.99) lies beyond the wall, so the top degree piles up against rho_star
    assert rho_tau(ginibre(), 0.99) > 0.8
    med = st.inverses[99](np.array([0.5]))[0]
    assert 0.8 - 0.8 / 36 < med < 0.8


def test_annulus_count(tables100):
    _, st = tables100
    b = sample_batch(st, 5, 2000)
    counts = np.sum((np.abs(b.configs) >= 0.5) & (np.abs(b.configs) <= 0.7), axis=1)
    p = np.array([t(0.7) - t(0.5) for t in st.tables])
    mean, var = p.sum(), np.sum(p * (1 - p))
    assert abs(counts.mean() - mean) < 3 * np.sqrt(var / 2000)


def test_modulus_histogram(tables100):
    _, st = tables100
    b = sample_batch(st, 6, 2000)
    edges = np.linspace(0, 0.8, 51)
    hist, _ = np.histogram(np.abs(b.configs).ravel(), edges)
    cdf = np.array([t(edges) for t in st.tables])
    p = np.diff(cdf, axis=1)  # per degree, per bin
    mean = 2000 * p.sum(axis=0)
    sd = np.sqrt(2000 * np.sum(p * (1 - p), axis=0))
    z = (hist - mean) / np.maximum(sd, 1e-12)
    # 50 bins at 3 sigma: allow one stray bin
    assert np.sum(np.abs(z) > 3) <= 1


def test_empirical_cdf_at_one_is_near_weibull():
    from conftest import ginibre_ctx
    from hardwall.extremes import a_n_const

    ctx = ginibre_ctx(500)
    st = prepare(ctx, nodes_per_degree=2048)
    b = sample_batch(st, 0, 2000)
    om, _ = empirical_max_modulus(b, 0.8, a_n_const(ctx.ensemble))
    assert np.mean(om <= 1.0) == pytest.approx(1 - np.exp(-1), abs=0.05)
