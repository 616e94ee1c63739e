from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from irratio.fekete import (chebyshev_start, diameter_table, legendre_fekete, max_vandermonde,
                            reference_limit, vandermonde_square)


def test_two_points_sit_on_the_ends():
    cfg = max_vandermonde(2)
    assert abs(cfg.normalized.value - 1) < mp.mpf(10) ** -30
    assert abs(cfg.points[0].value) < 1e-30 and abs(cfg.points[1].value - 1) < 1e-30


def test_three_points():
    cfg = max_vandermonde(3, precision=128)
    with mp.workprec(128):
        assert abs(cfg.value.value - mp.mpf(1) / 16) < mp.mpf(10) ** -30
        assert abs(cfg.normalized.value - mp.root(mp.mpf(1) / 16, 6)) < mp.mpf(10) ** -30
        assert abs(cfg.points[1].value - mp.mpf(1) / 2) < mp.mpf(10) ** -15


@pytest.mark.parametrize("n", [4, 5, 7, 9])
def test_legendre_oracle(n):
    cfg = max_vandermonde(n, precision=128)
    ref = legendre_fekete(n, 128)
    with mp.workprec(128):
        for p, r in zip(cfg.points, ref):
            assert abs(p.value - r) < mp.mpf(10) ** -15
        assert abs(cfg.value.value - vandermonde_square(ref)) < mp.ldexp(vandermonde_square(ref), -90)


@pytest.mark.parametrize("n", [3, 6])
def test_optimum_is_symmetric(n):
    pts = [p.value for p in max_vandermonde(n).points]
    for a, b in zip(pts, reversed(pts)):
        assert abs(a + b - 1) < 1e-15


@given(st.sampled_from([Fraction(1, 3), Fraction(1, 2), 2, 3, Fraction(7, 5)]), st.integers(2, 5))
@settings(max_examples=15)
def test_scaling_covariance(eps, n):
    # the maximum on [0, eps] is eps^(n(n-1)) times the maximum on [0, 1]
    unit = max_vandermonde(n, 1, 96).value.value
    scaled = max_vandermonde(n, eps, 96).value.value
    with mp.workprec(96):
        e = mp.mpf(eps.numerator) / eps.denominator if isinstance(eps, Fraction) else mp.mpf(eps)
        assert abs(scaled - unit * e ** (n * (n - 1))) < mp.ldexp(abs(scaled), -70)


def test_three_points_on_zero_two():
    assert abs(max_vandermonde(3, 2).value.value - 4) < 1e-25


def test_table_decreases_toward_quarter():
    rows = diameter_table(8, precision=96)
    vals = [float(v.value) for _, v in rows]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert all(v > 0.25 for v in vals)
    assert float(reference_limit()) == 0.25


def test_start_and_arguments():
    assert [float(v) for v in chebyshev_start(2)] == [0.0, 1.0]
    start = chebyshev_start(5)
    assert start[0] == 0 and start[-1] == 1 and sorted(start) == start
    with pytest.raises(ValueError):
        max_vandermonde(1)
    with pytest.raises(ValueError):
        max_vandermonde(3, -1)
    with pytest.raises(ValueError):
        diameter_table(1)


def test_as_dict_strings():
    d = max_vandermonde(3).as_dict(10)
    assert d["n"] == 3
    assert d["normalized"].startswith("0.62996052")
    assert len(d["points"]) == 3
