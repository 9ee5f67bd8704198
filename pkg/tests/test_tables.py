import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardwall.errors import DomainError
from hardwall.tables import CdfTable, RadialInverse


def uniform_disk_table(n=200):
    # CDF r^2 on (0, 1): head power 2, survival ~ 2 (1 - r)
    r = np.linspace(0, 1, n + 1)[1:-1]
    with np.errstate(divide="ignore"):
        return CdfTable(nodes=r, values=r**2, lo=0.0, hi=1.0, log_head=2 * np.log(r), log_survival=np.log1p(-(r**2)))


def test_table_validation():
    with pytest.raises(DomainError):
        CdfTable(nodes=np.array([0.0, 0.0, 1.0]), values=np.array([0.0, 0.5, 1.0]))
    with pytest.raises(DomainError):
        CdfTable(nodes=np.array([0.0, 0.5, 1.0]), values=np.array([0.0, 0.6, 0.5]))


def test_table_clamps_outside_support():
    t = uniform_disk_table()
    assert t(-1.0) == 0.0 and t(2.0) == 1.0
    assert t(0.5) == pytest.approx(0.25, abs=1e-6)
    assert t.is_monotone()


@settings(max_examples=100)
@given(st.floats(1e-12, 1 - 1e-12))
def test_inverse_round_trip(u):
    inv = RadialInverse.from_table(uniform_disk_table(), head_power=2, wall_power=1)
    r = float(inv(np.array([u]))[0])
    assert r == pytest.approx(np.sqrt(u), rel=1e-5, abs=1e-9)


def test_inverse_extrapolates_in_both_tails():
    inv = RadialInverse.from_table(uniform_disk_table(), head_power=2, wall_power=1)
    r = inv(np.array([1e-20, 1 - 1e-15]))
    assert r[0] == pytest.approx(1e-10, rel=1e-6)
    assert 1 - r[1] == pytest.approx(0.5e-15, rel=0.2)
    u = np.linspace(0.001, 0.999, 500)
    assert np.all(np.diff(inv(u)) > 0)
