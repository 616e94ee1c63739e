from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from irratio.exactnum import lcm_upto
from irratio.forms import (CATALAN, PI, ZETA2, Constant, DeltaRule, LinearForm, UnknownFamily,
                           beukers_seeds, catalan_densified_r, catalan_r,
                           catalan_snap_report, densified_exponents,
                           family, log_form, pi_form, pi_real_moment, validate_beukers,
                           zeta2_form, zeta_q3)
from irratio.quad import integrate_1d


def test_log_forms_small_cases():
    assert (log_form(3, 1).a, log_form(3, 1).b) == (4, 4)
    assert (log_form(2, 2).a, log_form(2, 2).b) == (13, 9)
    assert (log_form(2, 0).a, log_form(2, 0).b) == (1, 0)


@pytest.mark.parametrize("a", [2, 3, 5])
def test_log_integrality_through_twenty(a):
    for n in range(21):
        assert log_form(a, n).clears(lcm_upto(n))


def test_pi_reduction():
    assert pi_form(1).reduce(1) == (-2, 8)
    for n in range(21):
        u, v = pi_form(n).reduce(n)
        assert u.denominator == 1 and v.denominator == 1


def test_pi_real_moments():
    m = [pi_real_moment(k) for k in range(4)]
    assert (m[0].a, m[0].b, m[0].scale) == (Fraction(1, 4), 0, "1")
    assert (m[1].a, m[1].b, m[1].scale) == (Fraction(-1, 4), -1, "sqrt2")
    assert (m[2].a, m[2].b) == (1, 3)
    assert (m[3].a, m[3].b, m[3].scale) == (-2, Fraction(-19, 3), "sqrt2")


@pytest.mark.parametrize("name", ["log2", "log3", "pi_real"])
@pytest.mark.parametrize("n", [0, 1, 4, 7])
def test_one_dimensional_forms_match_quadrature(name, n):
    spec = family(name)
    lo, hi = spec.interval
    f = spec.integrand(n)
    q = integrate_1d(f, lo, hi, 110)
    exact = spec.form(n).evaluate(140)
    with mp.workprec(140):
        assert abs(q.value.value - exact.value) < mp.ldexp(abs(exact.value), -100)


def test_linear_form_evaluation_survives_cancellation():
    f = log_form(2, 20)
    v = f.evaluate(128)
    with mp.workprec(600):
        truth = mp.mpf(f.a.numerator) / f.a.denominator * mp.log(2) \
            - mp.mpf(f.b.numerator) / f.b.denominator
        assert abs(v.value - truth) <= v.err


def test_clear_rejects_non_integral():
    f = LinearForm(PI, Fraction(1, 3), 0)
    with pytest.raises(ValueError):
        f.clear(2)
    assert f.clear(3) == (1, 0)


def test_beukers_seeds_and_recurrence():
    f0, f1 = beukers_seeds("zeta2")
    assert (f0.a, f0.b) == (1, 0)
    assert (f1.a, f1.b) == (-3, -5)
    f2 = zeta2_form(2)
    assert (f2.a, f2.b) == (19, Fraction(125, 4))


@pytest.mark.parametrize("n", [2, 4, 6])
def test_zeta2_recurrence_agrees_with_quadrature(n):
    check = validate_beukers("zeta2", n, 30)
    assert check.agree_digits >= 30
    assert all(isinstance(c, int) for c in check.cleared)


@pytest.mark.parametrize("q", [Fraction(1, 2), Fraction(1, 3), Fraction(-1, 2), Fraction(3, 4)])
def test_zeta_q3_forms_agree(q):
    vals = [zeta_q3(q, 200, form) for form in (1, 2, 3)]
    with mp.workprec(200):
        for v in vals[1:]:
            assert abs(v.value - vals[0].value) < mp.mpf(10) ** -55


def test_zeta_q3_small_q_is_close_to_q():
    v = zeta_q3(Fraction(1, 1000), 128)
    assert abs(float(v.value) - 0.001) < 1e-5


def test_catalan_first_integral():
    r0 = catalan_r(0, 128)
    with mp.workprec(128):
        assert abs(2 * r0.value - 16 * mp.catalan) < mp.mpf(10) ** -35


def test_densified_exponents_spread_n():
    for n in range(20):
        assert sum(densified_exponents(n)) == n
    assert densified_exponents(5) == (1, 1, 1, 1, 1)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_catalan_series_matches_quadrature(n):
    a = catalan_r(n, 100)
    b = catalan_r(n, 100, method="quadrature")
    with mp.workprec(100):
        assert abs(a.value - b.value) < mp.ldexp(abs(a.value), -90)


def test_catalan_snap_small():
    rep = catalan_snap_report(1, 336)
    assert (rep.u, rep.v) == (-1792, 1664)
    assert rep.residual < mp.mpf(10) ** -50
    with pytest.raises(ValueError):
        catalan_r(1, 64, method="simpson")


def test_densified_matches_plain_at_multiples_of_five():
    with mp.workprec(100):
        assert abs(catalan_densified_r(5, 96).value - catalan_r(1, 96).value) < mp.mpf(10) ** -25


def test_family_lookup():
    assert family("pi").name == "pi_real"
    assert family("log(7)").xi == Constant("log", 7)
    assert family("zeta2").xi == ZETA2
    assert family("catalan").xi == CATALAN and not family("catalan").exact
    with pytest.raises(UnknownFamily):
        family("log1")
    with pytest.raises(UnknownFamily):
        family("e")


def test_epsilons_are_maxima_of_z():
    for name in ("log2", "log3", "pi_real"):
        spec = family(name)
        lo, hi = spec.interval
        with mp.workprec(80):
            zmax = mp.findroot(lambda x: mp.diff(spec.z_fn, x), (lo + hi) / 2 if name != "pi_real" else 0.4)
            assert abs(spec.z_fn(zmax) - spec.epsilon(80)) < mp.mpf(10) ** -15


@given(st.integers(1, 5), st.integers(1, 40), st.integers(1, 3), st.integers(1, 2))
@settings(max_examples=30)
def test_delta_rule_growth(const, base, power, stretch):
    rule = DeltaRule(const, base, power, stretch)
    assert rule(0) == const
    with mp.workprec(64):
        assert abs(rule.growth(64) - base * mp.e ** (power * stretch)) < 1e-10
    assert rule(6) % (lcm_upto(6 * stretch) ** power) == 0
