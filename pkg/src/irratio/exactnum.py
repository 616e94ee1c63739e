"""Exact scalars (rationals, Gaussian rationals), tracked-error big floats and
the lcm denominators d_n = lcm(1, ..., n).

Rationals are plain :class:`fractions.Fraction` objects: always reduced,
positive denominator, never rounded.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import mpmath as mp

Rational = Fraction
RationalLike = Union[int, Fraction]


def as_rational(x: RationalLike | str) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot make an exact rational from {type(x).__name__}")


def rational_str(x: Fraction) -> str:
    """Wire encoding ``"p/q"`` (``"p"`` for integers)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# Gaussian rationals
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianRational:
    """Element ``re + im*i`` of Q[i].

    No unit normalisation is applied; equality is componentwise.
    """

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_rational(self.re))
        object.__setattr__(self, "im", as_rational(self.im))

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return cls(as_rational(x), Fraction(0))

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        nrm = o.norm()
        if nrm == 0:
            raise ZeroDivisionError("division by zero in Q[i]")
        num = self * o.conjugate()
        return GaussianRational(num.re / nrm, num.im / nrm)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        result, base = GaussianRational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def is_gaussian_integer(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def __repr__(self):
        return f"GaussianRational({rational_str(self.re)}, {rational_str(self.im)})"

    def __str__(self):
        if self.im == 0:
            return rational_str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{rational_str(self.re)}{sign}{rational_str(abs(self.im))}i"


I = GaussianRational(0, 1)
ONE_MINUS_I = GaussianRational(1, -1)


def gauss_reduce(n: int) -> GaussianRational:
    """Unit-clearing factor ``2i (1-i)^(4{n/4})`` for the arc forms.

    ``4{n/4}`` is ``n mod 4``, so the factor has period 4 in ``n``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return 2 * I * ONE_MINUS_I ** (n % 4)


# --------------------------------------------------------------------------
# lcm(1..n)
# --------------------------------------------------------------------------


class _LcmTable:
    # Monotone table d_0..d_k; growth is done under a lock and published by
    # swapping in a longer tuple, so readers never see a partial table.

    def __init__(self):
        self._table: tuple[int, ...] = (1,)
        self._lock = threading.Lock()

    def get(self, n: int) -> int:
        table = self._table
        if n < len(table):
            return table[n]
        with self._lock:
            table = self._table
            if n >= len(table):
                grown = list(table)
                d = grown[-1]
                for k in range(len(grown), n + 1):
                    d = d * k // math.gcd(d, k)
                    grown.append(d)
                self._table = tuple(grown)
            return self._table[n]


_LCM = _LcmTable()


def lcm_upto(n: int) -> int:
    """``d_n = lcm(1, ..., n)`` with ``d_0 = 1``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _LCM.get(n)


# --------------------------------------------------------------------------
# BigFloat
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BigFloat:
    """A real at an explicit binary precision with an absolute error bound.

    ``err`` is ``None`` when no bound is known. Arithmetic propagates bounds
    interval-style when both operands carry one (first-order terms plus the
    rounding of the result); otherwise the result's bound is unknown.
    """

    value: mp.mpf
    prec: int
    err: Optional[mp.mpf] = None

    @classmethod
    def exact(cls, x, prec: int) -> "BigFloat":
        """Round an exact rational/int to ``prec`` bits; bound = half ulp."""
        with mp.workprec(prec):
            if isinstance(x, Fraction):
                v = mp.mpf(x.numerator) / x.denominator
            else:
                v = mp.mpf(x)
            return cls(v, prec, _ulp(v, prec))

    @classmethod
    def from_mpf(cls, v, prec: int, err=None) -> "BigFloat":
        with mp.workprec(prec):
            return cls(mp.mpf(v), prec, None if err is None else mp.mpf(err))

    def _combine(self, other, value, err):
        prec = min(self.prec, other.prec)
        if self.err is None or other.err is None:
            return BigFloat(value, prec, None)
        return BigFloat(value, prec, err + _ulp(value, prec))

    def _lift(self, other) -> "BigFloat":
        if isinstance(other, BigFloat):
            return other
        return BigFloat.exact(as_rational(other), self.prec)

    def __add__(self, other):
        o = self._lift(other)
        with mp.workprec(min(self.prec, o.prec)):
            v = self.value + o.value
            e = None if self.err is None or o.err is None else self.err + o.err
        return self._combine(o, v, e)

    __radd__ = __add__

    def __neg__(self):
        # mpf negation rounds to the ambient precision, so set ours
        with mp.workprec(self.prec):
            return BigFloat(-self.value, self.prec, self.err)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        with mp.workprec(min(self.prec, o.prec)):
            v = self.value * o.value
            e = None
            if self.err is not None and o.err is not None:
                e = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return self._combine(o, v, e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        with mp.workprec(min(self.prec, o.prec)):
            v = self.value / o.value
            e = None
            if self.err is not None and o.err is not None:
                lo = abs(o.value) - o.err
                e = mp.inf if lo <= 0 else (self.err + abs(v) * o.err) / lo
        return self._combine(o, v, e)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __abs__(self):
        with mp.workprec(self.prec):
            return BigFloat(abs(self.value), self.prec, self.err)

    def __float__(self):
        return float(self.value)

    def __lt__(self, other):
        return self.value < self._lift(other).value

    def __gt__(self, other):
        return self.value > self._lift(other).value

    def root(self, k: int) -> "BigFloat":
        """Real k-th root of a positive value."""
        with mp.workprec(self.prec):
            v = mp.root(self.value, k)
            e = None
            if self.err is not None:
                # |d/dx x^(1/k)| = v / (k x)
                e = v * self.err / (k * self.value) + _ulp(v, self.prec)
        return BigFloat(v, self.prec, e)

    def log(self) -> "BigFloat":
        with mp.workprec(self.prec):
            v = mp.log(self.value)
            e = None
            if self.err is not None:
                lo = self.value - self.err
                e = mp.inf if lo <= 0 else self.err / lo + _ulp(v, self.prec)
        return BigFloat(v, self.prec, e)

    @property
    def digits(self) -> int:
        """Decimal digits carried by the working precision."""
        return int(self.prec * math.log10(2))

    def to_str(self, digits: Optional[int] = None) -> str:
        d = self.digits if digits is None else digits
        with mp.workprec(self.prec):
            return mp.nstr(self.value, max(1, d))

    def __repr__(self):
        err = "unknown" if self.err is None else mp.nstr(self.err, 3)
        return f"BigFloat({self.to_str(20)}, prec={self.prec}, err={err})"


def _ulp(v, prec: int):
    if v == 0:
        return mp.mpf(0)
    with mp.workprec(prec):
        return mp.ldexp(mp.mpf(1), int(mp.floor(mp.log(abs(v), 2))) - prec + 1)


def dn_growth_table(nmax: int, prec: int = 128) -> list[tuple[int, BigFloat]]:
    """Rows ``(n, d_n^(1/n))``; the roots tend to e by the prime number theorem."""
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    return [(n, BigFloat.exact(lcm_upto(n), prec).root(n)) for n in range(1, nmax + 1)]
