import math
import threading
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from irratio.exactnum import (I, ONE_MINUS_I, BigFloat, GaussianRational, as_rational,
                              dn_growth_table, gauss_reduce, lcm_upto, rational_str)

rationals = st.fractions(max_denominator=10 ** 6).filter(lambda q: abs(q) < 10 ** 6)
gaussians = st.builds(GaussianRational, rationals, rationals)


def test_as_rational_coerces_and_rejects():
    assert as_rational(3) == Fraction(3)
    assert as_rational("-4/6") == Fraction(-2, 3)
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)


@given(rationals)
def test_rational_str_round_trips(q):
    assert Fraction(rational_str(q)) == q
    assert "/" not in rational_str(Fraction(q.numerator))


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if b != 0:
        assert (a / b) * b == a


@given(gaussians)
def test_norm_is_multiplicative_and_real(a):
    assert (a * a.conjugate()).is_real()
    assert (a * a).norm() == a.norm() ** 2


def test_units():
    assert I * I == -1
    assert ONE_MINUS_I ** 2 == -2 * I
    assert ONE_MINUS_I ** 4 == -4
    assert (ONE_MINUS_I ** -1) * ONE_MINUS_I == 1
    assert str(GaussianRational(1, -2)) == "1-2i"


def test_gauss_reduce_has_period_four():
    assert gauss_reduce(0) == 2 * I
    assert gauss_reduce(1) == GaussianRational(2, 2)
    for n in range(12):
        assert gauss_reduce(n) == gauss_reduce(n + 4)
    with pytest.raises(ValueError):
        gauss_reduce(-1)


def test_lcm_matches_stdlib():
    for n in range(0, 60):
        assert lcm_upto(n) == (math.lcm(*range(1, n + 1)) if n else 1)


def test_lcm_table_is_thread_safe():
    out = {}

    def work(k):
        out[k] = lcm_upto(200 + k)

    threads = [threading.Thread(target=work, args=(k,)) for k in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for k, v in out.items():
        assert v == math.lcm(*range(1, 201 + k))


@given(rationals, rationals)
def test_bigfloat_error_bounds_contain_exact_result(p, q):
    a, b = BigFloat.exact(p, 60), BigFloat.exact(q, 60)
    exact = {"+": p + q, "-": p - q, "*": p * q}
    got = {"+": a + b, "-": a - b, "*": a * b}
    with mp.workprec(300):
        for op, val in exact.items():
            truth = mp.mpf(val.numerator) / val.denominator
            assert abs(got[op].value - truth) <= got[op].err


def test_bigfloat_unknown_error_propagates():
    a = BigFloat(mp.mpf(2), 64, None)
    assert (a + BigFloat.exact(1, 64)).err is None


def test_bigfloat_root_and_log():
    x = BigFloat.exact(16, 128)
    with mp.workprec(128):
        assert abs(x.root(4).value - 2) < mp.mpf(10) ** -35
        assert abs(x.log().value - mp.log(16)) <= x.log().err
    assert x.digits == 38


def test_dn_growth_tends_to_e():
    table = dn_growth_table(400, 64)
    assert len(table) == 400
    last = float(table[-1][1])
    assert abs(last - math.e) < 0.1
    with pytest.raises(ValueError):
        dn_growth_table(0)
