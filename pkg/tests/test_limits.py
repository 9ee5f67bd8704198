import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardwall.errors import DomainError
from hardwall.limits import (
    canonical_spec,
    cauchy_direct,
    cauchy_transform,
    ginibre_kernel,
    half_line_mass,
    k_alpha,
    k_alpha_diag_closed,
    k_f,
    k_f_fast,
    kernel_free,
    kernel_hard,
    mass_one_reduced,
    mass_one_residual,
    one_point,
    plasma_F,
    plasma_H,
    power_spec,
    unit_laplace,
    ward_report,
    ward_residual,
)

half_plane = st.builds(complex, st.floats(0.05, 4.0), st.floats(-4.0, 4.0))
alphas = st.sampled_from([-0.5, 0.0, 1.0, 2.3])


def test_diagonal_closed_form():
    x = np.array([1e-3, 0.1, 1.0, 5.0, 30.0])
    assert np.allclose(np.real(k_alpha(0.0, x, x)), k_alpha_diag_closed(x), rtol=1e-12)
    assert k_alpha(0.0, 1.0, 1.0).real == pytest.approx((1 - 3 * math.exp(-2)) / 4, rel=1e-14)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0, 3.3])
def test_unit_laplace_branches_agree(beta):
    c = 40.0 * np.exp(1j * np.linspace(-1.5, 1.5, 9))
    lo = unit_laplace(beta, c * (1 - 1e-12))
    hi = unit_laplace(beta, c * (1 + 1e-12))
    assert np.allclose(lo, hi, rtol=1e-11)


def test_unit_laplace_elementary():
    # beta = 1: int_0^1 t e^{-tc} dt = (1 - e^{-c}(1 + c)) / c^2
    for c in [0.3, 2 + 5j, 55.0, 80 - 30j]:
        ref = (1 - np.exp(-c) * (1 + c)) / c**2
        assert unit_laplace(1.0, c) == pytest.approx(ref, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(alphas, half_plane, half_plane)
def test_k_alpha_hermitian(alpha, z, w):
    assert k_alpha(alpha, z, w) == pytest.approx(np.conj(k_alpha(alpha, w, z)), rel=1e-12, abs=1e-300)


@settings(max_examples=15, deadline=None)
@given(alphas, st.lists(half_plane, min_size=3, max_size=8, unique=True))
def test_k_alpha_gram_psd(alpha, zs):
    z = np.array(zs)
    G = k_alpha(alpha, z[:, None], z[None, :])
    ev = np.linalg.eigvalsh(G)
    assert ev.min() >= -1e-12 * max(1.0, ev.max())


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_canonical_kf_matches_k_alpha(alpha):
    spec = canonical_spec(alpha)
    z, w = 0.7 + 0.4j, 1.3 - 0.9j
    ref = k_alpha(alpha, z, w)
    assert k_f(spec, z, w) == pytest.approx(ref, rel=1e-10)
    assert k_f_fast(spec, z, w) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 3.0])
def test_half_line_mass(alpha):
    assert half_line_mass(alpha) == pytest.approx(0.5, abs=1e-10)


def test_half_plane_domain():
    with pytest.raises(DomainError):
        k_alpha(0.0, -1.0, 1.0)
    with pytest.raises(DomainError):
        k_alpha(-1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        canonical_spec(0.0, [(0, 2), (1, 3)])


def test_ginibre_and_plasma_references():
    assert ginibre_kernel(0.3 + 0.1j, 0.3 + 0.1j) == pytest.approx(1.0)
    assert plasma_F(0.0) == pytest.approx(0.5)
    assert plasma_H(0.0) == pytest.approx(math.log(2), rel=1e-12)
    assert kernel_free(0.0, 0.0) == pytest.approx(0.5)
    assert plasma_H(-1.5, cutoff=8.0) == pytest.approx(plasma_H(-1.5, cutoff=12.0), rel=1e-13)
    with pytest.raises(DomainError):
        plasma_H(0.5)
    with pytest.raises(DomainError):
        kernel_hard(0.1, -1.0)


def test_hard_kernel_density_profile():
    # bulk value 1 far inside, an overshoot, then H(0) = log 2 at the edge
    x = np.array([-6.0, -1.0, -1e-9])
    d = np.real(kernel_hard(x, x))
    assert d[0] == pytest.approx(1.0, abs=1e-6)
    assert d[1] > 1.0
    assert d[2] == pytest.approx(math.log(2), abs=1e-6)


# ------------------------------------------------------------ mass-one


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0])
def test_mass_one_reduced_canonical(alpha):
    spec = canonical_spec(alpha)
    for x in [0.1, 0.5, 1.0, 2.5]:
        assert abs(mass_one_reduced(spec, x)) < 1e-13


def test_mass_one_union_of_intervals():
    spec = canonical_spec(0.5, [(0.0, 1.0), (2.0, 3.0)])
    assert abs(mass_one_reduced(spec, 0.8)) < 1e-13


def test_mass_one_direct_quadrature():
    rep = mass_one_residual(canonical_spec(0.0), 1.0 + 2.0j)
    assert abs(rep.direct) < 1e-4
    assert not rep.flagged


def test_mass_one_detects_wrong_weight():
    bad = power_spec(0.0, 2.0, 1.0, 1.0)
    assert abs(mass_one_reduced(bad, 1.0)) > 1e-2


def test_t_on_0_2_is_admissible():
    # t 1_(0,2) is the canonical weight on E = (0, 2), not a counterexample
    spec = power_spec(0.0, 1.0, 1.0, 2.0)
    assert abs(mass_one_reduced(spec, 0.7)) < 1e-13


def test_mass_one_domain():
    with pytest.raises(DomainError):
        mass_one_residual(canonical_spec(0.0), -1.0)


# ---------------------------------------------------------------- Ward


def test_cauchy_transform_is_real_and_matches_direct():
    spec = canonical_spec(0.0)
    c = cauchy_transform(spec, 1.0 + 3.0j)
    assert c.imag == 0.0
    assert cauchy_direct(spec, 1.0).real == pytest.approx(c.real, abs=1e-7)


def test_ward_alpha_zero():
    rep = ward_report(canonical_spec(0.0), np.linspace(0.2, 3.0, 15))
    assert rep.max_residual < 1e-7


@pytest.mark.parametrize("alpha", [-0.5, 1.0])
def test_ward_wall_charge(alpha):
    spec = canonical_spec(alpha)
    for x in [0.4, 1.0, 2.0]:
        raw = ward_residual(spec, x)
        assert raw == pytest.approx(-alpha / (4 * x * x), abs=1e-6)
        assert abs(ward_residual(spec, x, include_wall_charge=True)) < 1e-6


def test_ward_fails_for_disconnected_set():
    spec = canonical_spec(0.0, [(0.0, 1.0), (2.0, 3.0)])
    rep = ward_report(spec, np.linspace(0.2, 3.0, 15))
    assert rep.max_residual > 1e-2


def test_ward_fails_for_wrong_weight():
    rep = ward_report(power_spec(0.0, 2.0, 1.0, 1.0), np.linspace(0.2, 3.0, 15))
    assert rep.max_residual > 1e-2


def test_ward_step_domain():
    with pytest.raises(DomainError):
        ward_residual(canonical_spec(0.0), 1e-4)


def test_one_point_positive():
    spec = canonical_spec(1.0)
    assert one_point(spec, 1.0) == pytest.approx(k_alpha(1.0, 1.0, 1.0).real, rel=1e-12)
    with pytest.raises(DomainError):
        one_point(spec, 0.0)
