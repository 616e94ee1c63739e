"""Approximation families r_n = a_n*xi - b_n and their defining integrals.

* ``log(a)``: exact coefficients from the binomial double sum of
  ``I_n(a) = int_1^a (x-1)^n (a-x)^n / x^(n+1) dx``.
* ``pi``: the same double sum at ``a = i`` (coefficients in Q[i], xi = log i
  along the unit arc), and the real moments of ``z(t) = 2^(3/2) t(1-t)/(1+t^2)``
  against ``dt/(1+t^2)``, with the odd-n ``sqrt(2)`` kept as a tag.
* ``zeta2`` / ``zeta3``: Beukers integrals.  Coefficients come from the
  Apery-type second order recurrences, seeded by snapping the n = 0, 1
  integrals to integer lattices; the recurrences are hypotheses checked
  against quadrature (:func:`validate_beukers`).
* ``catalan``: numeric integrals, snapped to ``Z G + Z``.
* :func:`zeta_q3`: the three series for the q-analogue of zeta(3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Optional

import gmpy2
import mpmath as mp
from gmpy2 import mpfr

from .exactnum import (BigFloat, GaussianRational, I, as_rational, gauss_reduce,
                       lcm_upto, rational_str)
from .quad import Integrand, integrate_1d, integrate_nd


class SnapFailure(ArithmeticError):
    """No integer relation with an acceptable residual was found."""


class UnknownFamily(KeyError):
    pass


# --------------------------------------------------------------------------
# Constants
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """A named constant xi: ``log(a)``, ``pi``, ``zeta(2)``, ``zeta(3)``, ``G``,
    or ``log(i) = i*pi/2``."""

    kind: str
    arg: Optional[int] = None

    def value(self, prec: int):
        with mp.workprec(prec):
            if self.kind == "log":
                return mp.log(self.arg)
            if self.kind == "pi":
                return +mp.pi
            if self.kind == "zeta2":
                return mp.pi ** 2 / 6
            if self.kind == "zeta3":
                return mp.zeta(3)
            if self.kind == "catalan":
                return +mp.catalan
            if self.kind == "log_i":
                return mp.mpc(0, mp.pi / 2)
        raise ValueError(f"unknown constant {self.kind}")

    def __str__(self):
        return {"log": f"log({self.arg})", "pi": "pi", "zeta2": "zeta(2)",
                "zeta3": "zeta(3)", "catalan": "G", "log_i": "log(i)"}[self.kind]


def LOG_A(a: int) -> Constant:
    return Constant("log", a)


PI = Constant("pi")
ZETA2 = Constant("zeta2")
ZETA3 = Constant("zeta3")
CATALAN = Constant("catalan")
LOG_I = Constant("log_i")

SQRT2 = "sqrt2"


@dataclass(frozen=True)
class LinearForm:
    """``scale * (a*xi - b)`` with exact rational ``a``, ``b``.

    ``scale`` is the exact tag ``"1"`` or ``"sqrt2"``.
    """

    xi: Constant
    a: Fraction
    b: Fraction
    scale: str = "1"

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        if self.scale not in ("1", SQRT2):
            raise ValueError("scale must be '1' or 'sqrt2'")

    def evaluate(self, prec: int = 128) -> BigFloat:
        # a*xi and b nearly cancel; carry enough extra bits to keep prec bits
        size = max(abs(self.a), abs(self.b), 1)
        extra = int(size.numerator).bit_length() + 32
        wp = prec + extra
        with mp.workprec(wp):
            v = mp.mpf(self.a.numerator) / self.a.denominator * self.xi.value(wp) \
                - mp.mpf(self.b.numerator) / self.b.denominator
            if self.scale == SQRT2:
                v *= mp.sqrt(2)
            err = mp.ldexp(mp.mpf(size.numerator) + 1, -wp + 4)
        with mp.workprec(prec):
            out = +v
        return BigFloat(out, prec, err + abs(out) * mp.ldexp(1, -prec + 1))

    def clear(self, delta: int) -> tuple[int, int]:
        """``(delta*a, delta*b)`` as integers; ValueError if not integral."""
        da, db = delta * self.a, delta * self.b
        if da.denominator != 1 or db.denominator != 1:
            raise ValueError(f"{delta} does not clear the denominators of {self}")
        return int(da), int(db)

    def clears(self, delta: int) -> bool:
        return (delta * self.a).denominator == 1 and (delta * self.b).denominator == 1

    def __str__(self):
        body = f"{rational_str(self.a)}*{self.xi} - {rational_str(self.b)}"
        return body if self.scale == "1" else f"sqrt(2)*({body})"


@dataclass(frozen=True)
class GaussForm:
    """``a*log(i) - b`` with ``a``, ``b`` in Q[i]; ``log(i) = i*pi/2`` on the arc."""

    a: GaussianRational
    b: GaussianRational
    xi: Constant = LOG_I

    def evaluate(self, prec: int = 128):
        extra = max(abs(c.numerator).bit_length()
                    for c in (self.a.re, self.a.im, self.b.re, self.b.im, Fraction(1))) + 32
        with mp.workprec(prec + extra):
            a = mp.mpc(_mpq(self.a.re), _mpq(self.a.im))
            b = mp.mpc(_mpq(self.b.re), _mpq(self.b.im))
            v = a * self.xi.value(prec + extra) - b
        with mp.workprec(prec):
            return +v

    def as_pi_form(self, factor: GaussianRational) -> tuple[Fraction, Fraction]:
        """Multiply by ``factor`` and return ``(u, v)`` with result ``u*pi + v``.

        Raises ArithmeticError if the product is not real.
        """
        c = factor * self.a * I / 2
        v = -(factor * self.b)
        if c.im != 0 or v.im != 0:
            raise ArithmeticError("form is not in Q*pi + Q after this factor")
        return c.re, v.re

    def reduce(self, n: int) -> tuple[Fraction, Fraction]:
        """``2i(1-i)^(n mod 4) d_n I_n = u*pi + v``."""
        return self.as_pi_form(gauss_reduce(n) * lcm_upto(n))


def _mpq(q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


# --------------------------------------------------------------------------
# log(a) and pi
# --------------------------------------------------------------------------


def _double_sum(a, n: int):
    """``(A, B)`` with ``I_n(a) = A*log(a) - B`` (a may be Gaussian)."""
    one = GaussianRational(1) if isinstance(a, GaussianRational) else Fraction(1)
    powers = [one]
    for _ in range(n):
        powers.append(powers[-1] * a)
    coef_log = sum((comb(n, j) ** 2 * powers[j] for j in range(n + 1)), one * 0)
    rest = one * 0
    for j in range(n + 1):
        cj = comb(n, j)
        for l in range(n + 1):
            if j + l == n:
                continue
            sign = -1 if (n + j + l) % 2 else 1
            rest = rest + (powers[j] - powers[n - l]) * Fraction(sign * cj * comb(n, l), j + l - n)
    return coef_log, -rest


def log_form(a: int, n: int) -> LinearForm:
    """``I_n(a) = A*log(a) - B`` exactly, for an integer ``a >= 2``."""
    if a < 2 or n < 0:
        raise ValueError("need a >= 2 and n >= 0")
    A, B = _double_sum(Fraction(a), n)
    return LinearForm(LOG_A(a), A, B)


def pi_form(n: int) -> GaussForm:
    """``I_n(i)`` along the unit arc as a form in ``log(i)`` over Q[i]."""
    if n < 0:
        raise ValueError("n must be non-negative")
    A, B = _double_sum(I, n)
    return GaussForm(A, B)


def pi_real_moment(n: int) -> LinearForm:
    """``int_0^1 z(t)^n dt/(1+t^2)`` with ``z = 2^(3/2) t(1-t)/(1+t^2)``.

    Uses ``I_n(i) = 2^(n+1) i (-1-i)^n J_n`` with
    ``J_n = int_0^1 t^n (1-t)^n/(1+t^2)^(n+1) dt`` and ``z^n = 2^(3n/2) (...)``;
    odd ``n`` keep one ``sqrt(2)`` as the scale tag.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    g = pi_form(n)
    denom = GaussianRational(2 ** (n + 1)) * I * GaussianRational(-1, -1) ** n
    u, v = g.as_pi_form(1 / denom)          # J_n = u*pi + v
    power2 = Fraction(2) ** ((3 * n) // 2)  # 2^(3n/2) = power2 * sqrt(2)^(n mod 2)
    return LinearForm(PI, power2 * u, -power2 * v, SQRT2 if n % 2 else "1")


# --------------------------------------------------------------------------
# Defining integrals (numeric oracles)
# --------------------------------------------------------------------------


def log_integrand(a: int, n: int) -> Integrand:
    def f(x, xl, xr):
        return (xl * xr / x) ** n / x
    return Integrand(f, 1, f"I_{n}({a})")


def pi_real_integrand(n: int) -> Integrand:
    def f(t, tl, tr):
        d = 1 + t * t
        c = gmpy2.sqrt(mpfr(8))
        return (c * tl * tr / d) ** n / d
    return Integrand(f, 1, f"pi_real moment {n}")


def beukers2_integrand(n: int) -> Integrand:
    """``(x(1-x)y(1-y)/(1-xy))^n / (1-xy)`` on [0,1]^2."""
    def f(x, xc):
        px = (x * xc) ** n

        def g(y, yc):
            d = xc + x * yc          # 1 - xy
            return px * (y * yc) ** n / d ** (n + 1)
        return g
    return Integrand(f, 2, f"beukers2 n={n}")


def beukers3_integrand(n: int) -> Integrand:
    """``(x(1-x)y(1-y)z(1-z)/(1-(1-xy)z))^n / (1-(1-xy)z)`` on [0,1]^3."""
    def f(x, xc):
        px = (x * xc) ** n

        def g(y, yc):
            pxy = px * (y * yc) ** n
            u = x * y

            def h(z, zc):
                d = zc + u * z       # 1 - (1-xy)z
                return pxy * (z * zc) ** n / d ** (n + 1)
            return h
        return g
    return Integrand(f, 3, f"beukers3 n={n}")


def catalan_integrand(e_x: int, e_xc: int, e_y: int, e_yc: int, e_den: int,
                      name: str = "") -> Integrand:
    """``x^e_x (1-x)^e_xc y^e_y (1-y)^e_yc / (1-xy)^e_den`` times the kernel
    ``x^(-1/2) (1-y)^(-1/2) / (1-xy)``."""
    def f(x, xc):
        px = x ** e_x * xc ** e_xc / gmpy2.sqrt(x)

        def g(y, yc):
            d = xc + x * yc
            return px * y ** e_y * yc ** e_yc / (gmpy2.sqrt(yc) * d ** (e_den + 1))
        return g
    return Integrand(f, 2, name or f"catalan({e_x},{e_xc},{e_y},{e_yc};{e_den})")


# x^(-1/2) at x=0; after the y-integration, (1-x)^(-1/2) at x=1; (1-y)^(-1/2)
CATALAN_SINGULAR = [(True, True), (False, True)]


# --------------------------------------------------------------------------
# Snapping
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Snap:
    u: int
    v: int
    residual: mp.mpf


def snap_lattice(value, xi_value, prec: int, maxcoeff: int = 10 ** 40) -> Snap:
    """Find integers ``u, v`` with ``value ~ u*xi + v`` via PSLQ on
    ``(value, xi, 1)``.  Accepted iff the relation has ``value``-coefficient
    +-1 and residual ``< 2^(-prec/2)`` relative to ``max(1, |value|)``.
    """
    with mp.workprec(prec):
        value, xi_value = mp.mpf(value), mp.mpf(xi_value)
        tol = mp.ldexp(max(1, abs(value)), -(prec // 2))
        with mp.workprec(max(prec, 64)):
            rel = mp.pslq([value, xi_value, mp.mpf(1)], tol=mp.ldexp(1, -(prec * 3 // 4)),
                          maxcoeff=maxcoeff, maxsteps=10 ** 5)
        if rel is None or abs(rel[0]) != 1:
            raise SnapFailure(f"no unimodular relation found for {mp.nstr(value, 15)}")
        c0, c1, c2 = rel
        u, v = -c1 * c0, -c2 * c0
        residual = abs(u * xi_value + v - value)
        if residual >= tol:
            raise SnapFailure(f"residual {mp.nstr(residual, 5)} above {mp.nstr(tol, 5)}")
        return Snap(int(u), int(v), residual)


# --------------------------------------------------------------------------
# Beukers zeta(2), zeta(3)
# --------------------------------------------------------------------------

# u_n * P(n) = Q(n) u_{n-1} + S(n) u_{n-2}, applied to both a_n and b_n
_RECURRENCES = {
    # r_n = (-1)^n (A_n zeta(2) - B_n); the sign is folded into the operator
    "zeta2": (lambda n: n * n, lambda n: -(11 * n * n - 11 * n + 3), lambda n: (n - 1) ** 2),
    # r_n = 2 (A_n zeta(3) - B_n)
    "zeta3": (lambda n: n ** 3, lambda n: 34 * n ** 3 - 51 * n ** 2 + 27 * n - 5,
              lambda n: -(n - 1) ** 3),
}
_POWER = {"zeta2": 2, "zeta3": 3}
_XI = {"zeta2": ZETA2, "zeta3": ZETA3}
SEED_PRECISION = 40


def beukers_integral(kind: str, n: int, precision: int = 96):
    integrand = beukers2_integrand(n) if kind == "zeta2" else beukers3_integrand(n)
    return integrate_nd(integrand, precision)


@lru_cache(maxsize=None)
def beukers_seeds(kind: str, prec: int = SEED_PRECISION) -> tuple[LinearForm, LinearForm]:
    """Forms at n = 0, 1 from quadrature: snap ``d_n^k r_n`` into ``Z xi + Z``
    at ``prec`` bits, then re-check the same integers at ``2*prec`` bits."""
    k, xi = _POWER[kind], _XI[kind]
    seeds = []
    for n in (0, 1):
        scale = lcm_upto(n) ** k
        q = beukers_integral(kind, n, prec)
        snap = snap_lattice(q.value.value * scale, xi.value(prec), prec, maxcoeff=10 ** 6)
        check = beukers_integral(kind, n, 2 * prec)
        with mp.workprec(2 * prec):
            resid = abs(snap.u * xi.value(2 * prec) + snap.v - check.value.value * scale)
            if resid >= mp.ldexp(max(1, abs(check.value.value * scale)), -prec):
                raise SnapFailure(f"{kind} seed n={n} fails re-verification ({mp.nstr(resid, 5)})")
        seeds.append(LinearForm(xi, Fraction(snap.u, scale), Fraction(-snap.v, scale)))
    return tuple(seeds)


@lru_cache(maxsize=8)
def _beukers_table(kind: str, nmax: int) -> tuple[LinearForm, ...]:
    P, Q, S = _RECURRENCES[kind]
    f0, f1 = beukers_seeds(kind)
    a = [f0.a, f1.a]
    b = [f0.b, f1.b]
    for n in range(2, nmax + 1):
        a.append((Q(n) * a[-1] + S(n) * a[-2]) / P(n))
        b.append((Q(n) * b[-1] + S(n) * b[-2]) / P(n))
    return tuple(LinearForm(_XI[kind], a[n], b[n]) for n in range(nmax + 1))


def _beukers_form(kind: str, n: int) -> LinearForm:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n <= 1:
        return beukers_seeds(kind)[n]
    # tables are built in blocks so nearby n share one recurrence run
    return _beukers_table(kind, max(16, 1 << (n.bit_length())))[n]


def zeta2_form(n: int) -> LinearForm:
    """Beukers double integral for zeta(2) as an exact form."""
    return _beukers_form("zeta2", n)


def zeta3_form(n: int) -> LinearForm:
    """Beukers triple integral for zeta(3) as an exact form."""
    return _beukers_form("zeta3", n)


@dataclass(frozen=True)
class BeukersCheck:
    kind: str
    n: int
    form: LinearForm
    exact_value: BigFloat
    quad_value: BigFloat
    agree_digits: float
    cleared: tuple[int, int]


def validate_beukers(kind: str, n: int, digits: int = 30) -> BeukersCheck:
    """Compare the recurrence form with quadrature of the integral at ``n``."""
    form = _beukers_form(kind, n)
    bits = int(math.ceil(digits * math.log2(10))) + 4
    q = beukers_integral(kind, n, bits)
    ex = form.evaluate(bits + 32)
    with mp.workprec(bits + 32):
        diff = abs(ex.value - q.value.value)
        agree = float(-mp.log10(diff / abs(ex.value))) if diff else float("inf")
    return BeukersCheck(kind, n, form, ex, q.value, agree,
                        form.clear(lcm_upto(n) ** _POWER[kind]))


# --------------------------------------------------------------------------
# Catalan
# --------------------------------------------------------------------------


def catalan_scale(n: int) -> int:
    """``2^(4n+1) d_(2n)^2``."""
    return 2 ** (4 * n + 1) * lcm_upto(2 * n) ** 2


def catalan_series(e_x: int, e_xc: int, e_y: int, e_yc: int, e_den: int,
                   precision: int = 128) -> BigFloat:
    """The integral of :func:`catalan_integrand` in closed form.

    Expanding ``1/(1-xy)^(e_den+1)`` and integrating termwise gives
    ``B(e_x+1/2, e_xc+1) B(e_y+1, e_yc+1/2) 3F2(e_den+1, e_x+1/2, e_y+1;
    e_x+e_xc+3/2, e_y+e_yc+3/2; 1)``, convergent when
    ``e_xc + e_yc + 1 > e_den``.  The value is computed at ``precision + 32``
    bits and compared with a second evaluation at ``precision + 64``; the
    difference is the reported error.
    """
    if e_xc + e_yc + 1 <= e_den:
        raise ValueError("the series diverges for these exponents")
    half = mp.mpf(1) / 2

    def value(bits):
        with mp.workprec(bits):
            pre = mp.beta(e_x + half, e_xc + 1) * mp.beta(e_y + 1, e_yc + half)
            return pre * mp.hyp3f2(e_den + 1, e_x + half, e_y + 1,
                                   e_x + e_xc + 1 + half, e_y + e_yc + 1 + half, 1)

    v, w = value(precision + 32), value(precision + 64)
    with mp.workprec(precision + 32):
        err = abs(v - w) + mp.ldexp(abs(v), -precision - 16)
    return BigFloat(v, precision, err)


def catalan_r(n: int, precision: int = 128, method: str = "series") -> BigFloat:
    """The Catalan integral at ``n`` (no denominator factor).

    ``method`` is ``"series"`` (closed-form hypergeometric sum, fast at any
    precision) or ``"quadrature"`` (nested tanh-sinh; an independent check).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if method == "series":
        return catalan_series(n, n, n, n, n, precision)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    q = integrate_nd(catalan_integrand(n, n, n, n, n, f"catalan n={n}"), precision,
                     singular=CATALAN_SINGULAR)
    return q.value


@dataclass(frozen=True)
class CatalanSnap:
    n: int
    scale: int
    u: int
    v: int
    residual: mp.mpf
    verify_residual: mp.mpf
    precision: int

    @property
    def form(self) -> LinearForm:
        return LinearForm(CATALAN, Fraction(self.u, self.scale), Fraction(-self.v, self.scale))


SNAP_BITS = 672   # a little over 200 decimal digits


def catalan_snap_report(n: int, precision: int = SNAP_BITS) -> CatalanSnap:
    """Snap ``2^(4n+1) d_(2n)^2 r_n = u*G + v`` at ``precision`` bits and
    re-verify the same ``(u, v)`` against the integral at twice the precision."""
    scale = catalan_scale(n)
    r = catalan_r(n, precision)
    with mp.workprec(precision):
        snap = snap_lattice(r.value * scale, CATALAN.value(precision), precision)
    r2 = catalan_r(n, 2 * precision)
    with mp.workprec(2 * precision):
        value = r2.value * scale
        resid2 = abs(snap.u * CATALAN.value(2 * precision) + snap.v - value)
        if resid2 >= mp.ldexp(max(1, abs(value)), -precision):
            raise SnapFailure(f"catalan n={n}: re-verification residual {mp.nstr(resid2, 5)}")
    return CatalanSnap(n, scale, snap.u, snap.v, snap.residual, resid2, precision)


def catalan_snap(n: int, precision: int = SNAP_BITS) -> LinearForm:
    return catalan_snap_report(n, precision).form


def densified_exponents(n: int) -> tuple[int, int, int, int, int]:
    """Exponents of ``x, 1-x, y, 1-y`` and of ``1/(1-xy)`` in the densified form."""
    return ((n + 1) // 5, (n + 2) // 5, (n + 3) // 5, (n + 4) // 5, n // 5)


def catalan_densified_r(n: int, precision: int = 128, method: str = "series") -> BigFloat:
    if n < 0:
        raise ValueError("n must be non-negative")
    ex, exc, ey, eyc, eden = densified_exponents(n)
    if method == "series":
        return catalan_series(ex, exc, ey, eyc, eden, precision)
    f = catalan_integrand(ex, exc, ey, eyc, eden, f"catalan densified n={n}")
    return integrate_nd(f, precision, singular=CATALAN_SINGULAR).value


# --------------------------------------------------------------------------
# zeta_q(3)
# --------------------------------------------------------------------------


def _sigma2_table(K: int) -> list[int]:
    s = [0] * (K + 1)
    for d in range(1, K + 1):
        dd = d * d
        for m in range(d, K + 1, d):
            s[m] += dd
    return s


def zeta_q3(q, precision: int = 192, form: int = 1) -> BigFloat:
    """``zeta_q(3)`` by one of its three series:

    1. ``sum sigma_2(k) q^k``
    2. ``sum m^2 q^m / (1 - q^m)``
    3. ``sum q^k (1 + q^k) / (1 - q^k)^3``

    Terms are dominated by ``A k^p |q|^k``; summation stops when the
    geometric tail bound drops below ``2^-precision``, and that bound is the
    reported error (plus rounding).
    """
    q = as_rational(q)
    if q == 0 or abs(q) >= 1:
        raise ValueError("need 0 < |q| < 1")
    if form not in (1, 2, 3):
        raise ValueError("form must be 1, 2 or 3")
    aq = abs(q)
    wp = precision + 32
    with mp.workprec(wp):
        qq = _mpq(q)
        qa = _mpq(aq)
        # term bounds A * k^p * |q|^k
        A, p = {1: (mp.mpf(2), 2),
                2: (1 / (1 - qa), 2),
                3: (2 / (1 - qa) ** 3, 0)}[form]
        target = mp.ldexp(1, -precision)

        def tail(K):
            ratio = (mp.mpf(K + 2) / (K + 1)) ** p * qa
            if ratio >= 1:
                return mp.inf
            return A * mp.mpf(K + 1) ** p * qa ** (K + 1) / (1 - ratio)

        K = 1
        while tail(K) > target:
            K *= 2
        lo, hi = K // 2, K
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if tail(mid) > target:
                lo = mid
            else:
                hi = mid
        K = hi
        total = mp.mpf(0)
        if form == 1:
            sig = _sigma2_table(K)
            qk = mp.mpf(1)
            for k in range(1, K + 1):
                qk *= qq
                total += sig[k] * qk
        elif form == 2:
            qm = mp.mpf(1)
            for m in range(1, K + 1):
                qm *= qq
                total += m * m * qm / (1 - qm)
        else:
            qk = mp.mpf(1)
            for k in range(1, K + 1):
                qk *= qq
                total += qk * (1 + qk) / (1 - qk) ** 3
        err = tail(K) + abs(total) * mp.ldexp(1, -wp + 8)
    return BigFloat(total, precision, err)


# --------------------------------------------------------------------------
# Families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DeltaRule:
    """``delta_n = const * base^n * d_(stretch*n)^power``; growth ``base * e^(power*stretch)``."""

    const: int = 1
    base: int = 1
    power: int = 1
    stretch: int = 1

    def __call__(self, n: int) -> int:
        return self.const * self.base ** n * lcm_upto(self.stretch * n) ** self.power

    def growth(self, prec: int = 128):
        with mp.workprec(prec):
            return self.base * mp.e ** (self.power * self.stretch)

    @property
    def growth_closed(self) -> str:
        k = self.power * self.stretch
        e = "e" if k == 1 else f"e^{k}"
        return e if self.base == 1 else f"{self.base}*{e}"

    def __str__(self):
        d = "d_n" if self.stretch == 1 else f"d_{self.stretch}n"
        d = d if self.power == 1 else f"{d}^{self.power}"
        parts = []
        if self.const != 1:
            parts.append(str(self.const))
        if self.base != 1:
            parts.append(f"{self.base}^n")
        parts.append(d)
        return "*".join(parts)


@dataclass(frozen=True)
class FamilySpec:
    name: str
    xi: Constant
    epsilon_closed: str
    epsilon_fn: Callable = field(repr=False)
    delta_rule: DeltaRule
    m: int
    exact: bool
    qualifies: bool
    form_fn: Callable = field(repr=False)
    integrand_fn: Callable = field(repr=False)
    z_fn: Callable = field(repr=False)
    singular: Optional[tuple] = None
    notes: str = ""

    def epsilon(self, prec: int = 128):
        with mp.workprec(prec):
            return self.epsilon_fn()

    def Delta(self, prec: int = 128):
        return self.delta_rule.growth(prec)

    @property
    def Delta_closed(self) -> str:
        return self.delta_rule.growth_closed

    def delta(self, n: int) -> int:
        return self.delta_rule(n)

    def form(self, n: int, *args, **kw) -> LinearForm:
        return self.form_fn(n, *args, **kw)

    def integrand(self, n: int) -> Integrand:
        return self.integrand_fn(n)

    def quadrature(self, n: int, precision: int = 128):
        """Quadrature of the defining integral ``int z^n omega``."""
        f = self.integrand(n)
        if f.dim == 1:
            lo, hi = self.interval
            return integrate_1d(f, lo, hi, precision)
        return integrate_nd(f, precision, singular=self.singular)

    @property
    def interval(self):
        if self.xi.kind == "log":
            return (1, self.xi.arg)
        return (0, 1)


def _log_family(a: int) -> FamilySpec:
    return FamilySpec(
        name=f"log{a}", xi=LOG_A(a),
        epsilon_closed=f"(sqrt({a})-1)^2",
        epsilon_fn=lambda: (mp.sqrt(a) - 1) ** 2,
        delta_rule=DeltaRule(), m=1, exact=True, qualifies=True,
        form_fn=lambda n: log_form(a, n),
        integrand_fn=lambda n: log_integrand(a, n),
        z_fn=lambda x: (x - 1) * (a - x) / x,
    )


_FAMILIES = {
    "pi_real": lambda: FamilySpec(
        name="pi_real", xi=PI, epsilon_closed="2-sqrt(2)",
        epsilon_fn=lambda: 2 - mp.sqrt(2),
        delta_rule=DeltaRule(const=4), m=1, exact=True, qualifies=True,
        form_fn=pi_real_moment, integrand_fn=pi_real_integrand,
        z_fn=lambda t: 2 * mp.sqrt(2) * t * (1 - t) / (1 + t * t),
        notes="odd-n forms carry sqrt(2); Hankel determinants factor it out exactly",
    ),
    "zeta2": lambda: FamilySpec(
        name="zeta2", xi=ZETA2, epsilon_closed="((sqrt(5)-1)/2)^5",
        epsilon_fn=lambda: ((mp.sqrt(5) - 1) / 2) ** 5,
        delta_rule=DeltaRule(power=2), m=2, exact=True, qualifies=True,
        form_fn=zeta2_form, integrand_fn=beukers2_integrand,
        z_fn=lambda x, y: x * (1 - x) * y * (1 - y) / (1 - x * y),
        singular=((False, False), (False, False)),
        notes="coefficients from a recurrence validated against quadrature",
    ),
    "zeta3": lambda: FamilySpec(
        name="zeta3", xi=ZETA3, epsilon_closed="(sqrt(2)-1)^4",
        epsilon_fn=lambda: (mp.sqrt(2) - 1) ** 4,
        delta_rule=DeltaRule(power=3), m=3, exact=True, qualifies=True,
        form_fn=zeta3_form, integrand_fn=beukers3_integrand,
        z_fn=lambda x, y, z: x * (1 - x) * y * (1 - y) * z * (1 - z) / (1 - (1 - x * y) * z),
        singular=((False, False),) * 3,
        notes="coefficients from a recurrence validated against quadrature",
    ),
    "catalan": lambda: FamilySpec(
        name="catalan", xi=CATALAN, epsilon_closed="((sqrt(5)-1)/2)^5",
        epsilon_fn=lambda: ((mp.sqrt(5) - 1) / 2) ** 5,
        delta_rule=DeltaRule(const=2, base=16, power=2, stretch=2), m=2,
        exact=False, qualifies=False,
        form_fn=catalan_snap,
        integrand_fn=lambda n: catalan_integrand(n, n, n, n, n, f"catalan n={n}"),
        z_fn=lambda x, y: x * (1 - x) * y * (1 - y) / (1 - x * y),
        singular=tuple(CATALAN_SINGULAR),
        notes="numeric forms snapped to Z*G + Z; denominators grow too fast",
    ),
}

_ALIASES = {"pi": "pi_real", "zeta(2)": "zeta2", "zeta(3)": "zeta3", "G": "catalan"}

FAMILY_NAMES = ("log2", "log3", "pi_real", "zeta2", "zeta3", "catalan")


def family(name: str) -> FamilySpec:
    """Look up a family: ``log<a>`` / ``log(<a>)`` for integer a >= 2,
    ``pi_real`` (alias ``pi``), ``zeta2``, ``zeta3``, ``catalan``."""
    key = _ALIASES.get(name, name)
    if key in _FAMILIES:
        return _FAMILIES[key]()
    if key.startswith("log"):
        arg = key[3:].strip("()")
        if arg.isdigit() and int(arg) >= 2:
            return _log_family(int(arg))
    raise UnknownFamily(name)
