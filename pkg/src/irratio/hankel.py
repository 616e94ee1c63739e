"""Hankel determinants of moment sequences, exact and numeric.

Exact determinants run fraction-free (Bareiss) elimination either over Q or
over Q[xi], where the entries are linear forms ``a*xi - b`` and the result
is a :class:`PolyForm` of degree at most n.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

import gmpy2
import mpmath as mp
from gmpy2 import mpfr

from .exactnum import BigFloat, as_rational, rational_str
from .forms import SQRT2, Constant, FamilySpec, LinearForm, family
from .quad import Integrand, integrate_1d, integrate_nd


class MixedSymbols(ValueError):
    """Entries of one determinant refer to different constants."""


class PrecisionExhausted(ArithmeticError):
    """Cancellation in numeric elimination used up the guard bits."""


class DegenerateMoments(ArithmeticError):
    """The leading Hankel determinant vanishes, so p_n drops degree."""


# --------------------------------------------------------------------------
# Polynomials in xi
# --------------------------------------------------------------------------


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class PolyForm:
    """``c_0 + c_1 xi + ... + c_d xi^d`` with rational coefficients."""

    xi: Optional[Constant]
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(as_rational(c) for c in self.coeffs))

    @classmethod
    def from_form(cls, form: LinearForm) -> "PolyForm":
        if form.scale != "1":
            raise ValueError("sqrt(2)-scaled forms must be reduced before entering Q[xi]")
        return cls(form.xi, (-form.b, form.a))

    @classmethod
    def const(cls, c, xi=None) -> "PolyForm":
        return cls(xi, (as_rational(c),))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _xi(self, other):
        if self.xi is None:
            return other.xi
        if other.xi is not None and other.xi != self.xi:
            raise MixedSymbols(f"{self.xi} vs {other.xi}")
        return self.xi

    def _lift(self, other) -> "PolyForm":
        if isinstance(other, PolyForm):
            return other
        return PolyForm(None, (as_rational(other),))

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return PolyForm(self._xi(o), tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return PolyForm(self.xi, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if self.is_zero() or o.is_zero():
            return PolyForm(self._xi(o), ())
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    out[i + j] += x * y
        return PolyForm(self._xi(o), tuple(out))

    __rmul__ = __mul__

    def divmod(self, other) -> tuple["PolyForm", "PolyForm"]:
        o = self._lift(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(rem) - len(o.coeffs) + 1)
        lead = o.coeffs[-1]
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + len(o.coeffs) - 1] / lead
            q[k] = c
            if c:
                for j, y in enumerate(o.coeffs):
                    rem[k + j] -= c * y
        xi = self._xi(o)
        return PolyForm(xi, tuple(q)), PolyForm(xi, tuple(rem))

    def __truediv__(self, other):
        """Exact division; raises ArithmeticError on a non-zero remainder."""
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PolyForm(None, (Fraction(other),))
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.coeffs == other.coeffs and (
            self.xi == other.xi or self.xi is None or other.xi is None or not self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def scaled(self, c) -> "PolyForm":
        c = as_rational(c)
        return PolyForm(self.xi, tuple(c * x for x in self.coeffs))

    def evaluate(self, prec: int = 128) -> BigFloat:
        if self.is_zero():
            return BigFloat(mp.mpf(0), prec, mp.mpf(0))
        big = max(abs(c) for c in self.coeffs)
        wp = prec + int(big.numerator).bit_length() + 16 * len(self.coeffs) + 32
        with mp.workprec(wp):
            x = self.xi.value(wp) if self.xi is not None else mp.mpf(0)
            acc = mp.mpf(0)
            for c in reversed(self.coeffs):
                acc = acc * x + mp.mpf(c.numerator) / c.denominator
            err = mp.ldexp(mp.mpf(big.numerator) * (abs(x) + 1) ** len(self.coeffs), -wp + 8)
        with mp.workprec(prec):
            out = +acc
        return BigFloat(out, prec, err + abs(out) * mp.ldexp(1, -prec + 1))

    def cleared(self, factor: int) -> Optional[tuple[int, ...]]:
        """Integer coefficients of ``factor * self``, or None if not integral."""
        out = [factor * c for c in self.coeffs]
        if any(c.denominator != 1 for c in out):
            return None
        return tuple(int(c) for c in out)

    def __str__(self):
        if not self.coeffs:
            return "0"
        sym = str(self.xi) if self.xi is not None else "xi"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else (sym if k == 1 else f"{sym}^{k}")
            terms.append(rational_str(c) if not mono else f"{rational_str(c)}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


# --------------------------------------------------------------------------
# Exact elimination
# --------------------------------------------------------------------------


def det_exact(matrix: Sequence[Sequence]):
    """Determinant by Bareiss fraction-free elimination.

    Entries may be ints, Fractions or PolyForms; every division is exact.
    """
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    M = [list(row) for row in matrix]
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if _is_zero(M[k][k]):
            swap = next((i for i in range(k + 1, n) if not _is_zero(M[i][k])), None)
            if swap is None:
                return _zero_like(M[0][0])
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) / prev
            M[i][k] = _zero_like(pivot)
        prev = pivot
    return M[n - 1][n - 1] if sign > 0 else -M[n - 1][n - 1]


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, PolyForm) else x == 0


def _zero_like(x):
    return PolyForm(x.xi, ()) if isinstance(x, PolyForm) else Fraction(0)


def _common_xi(seq: Sequence[LinearForm]) -> Constant:
    xis = {f.xi for f in seq}
    if len(xis) != 1:
        raise MixedSymbols(f"mixed constants: {sorted(map(str, xis))}")
    return xis.pop()


def _strip_sqrt2(seq: Sequence[LinearForm]) -> tuple[list[LinearForm], bool]:
    """Write ``m_k = sqrt(2)^k e_k`` when the sqrt(2) tag sits exactly on the odd
    indices; return the rational ``e_k`` and whether stripping happened."""
    tags = [f.scale == SQRT2 for f in seq]
    if not any(tags):
        return list(seq), False
    if any(t != (k % 2 == 1) for k, t in enumerate(tags)):
        raise ValueError("sqrt(2) tags must sit on the odd indices to factor them out")
    out = []
    for k, f in enumerate(seq):
        d = Fraction(2) ** (k // 2)
        out.append(LinearForm(f.xi, f.a / d, f.b / d))
    return out, True


def hankel_matrix(values: Sequence, n: int, shift: int = 0) -> list[list]:
    return [[values[j + l + shift] for l in range(n)] for j in range(n)]


def hankel_exact(seq: Sequence[LinearForm], n: int) -> PolyForm:
    """``det(r_{j+l})_{0<=j,l<n}`` as a polynomial in xi.

    ``sqrt(2)``-tagged odd entries are factored out first with
    ``det(c^(j+l) v_(j+l)) = c^(n(n-1)) det(v_(j+l))`` at ``c = sqrt(2)``.
    """
    if n < 1:
        return PolyForm(None, (Fraction(1),))
    entries = list(seq[: 2 * n - 1])
    if len(entries) < 2 * n - 1:
        raise ValueError(f"need {2 * n - 1} forms, got {len(entries)}")
    xi = _common_xi(entries)
    entries, stripped = _strip_sqrt2(entries)
    polys = [PolyForm.from_form(f) for f in entries]
    det = det_exact(hankel_matrix(polys, n))
    if stripped:
        det = det.scaled(Fraction(2) ** (n * (n - 1) // 2))
    return PolyForm(xi, det.coeffs)


def hankel_rational(values: Sequence, n: int) -> Fraction:
    values = [as_rational(v) for v in values[: 2 * n - 1]]
    return det_exact(hankel_matrix(values, n))


def vandermonde_det(z: Sequence) -> Fraction:
    """``det(z_j^l) = prod_{j<l} (z_l - z_j)``."""
    z = [as_rational(x) for x in z]
    out = Fraction(1)
    for j in range(len(z)):
        for l in range(j + 1, len(z)):
            out *= z[l] - z[j]
    return out


def vandermonde_matrix_det(z: Sequence) -> Fraction:
    z = [as_rational(x) for x in z]
    return det_exact([[x ** l for l in range(len(z))] for x in z])


def scaling_check(values: Sequence, c, n: int) -> bool:
    """Exact check of ``det(c^(j+l) v_(j+l)) = c^(n(n-1)) det(v_(j+l))``."""
    c = as_rational(c)
    if c == 0:
        raise ValueError("c must be non-zero")
    values = [as_rational(v) for v in values[: 2 * n - 1]]
    scaled = [c ** k * v for k, v in enumerate(values)]
    return hankel_rational(scaled, n) == c ** (n * (n - 1)) * hankel_rational(values, n)


@dataclass(frozen=True)
class KroneckerScan:
    dets: tuple          # D_1 .. D_N
    first_vanishing: Optional[int]

    def as_dict(self):
        return {"dets": [rational_str(d) for d in self.dets],
                "first_vanishing": self.first_vanishing}


def kronecker_scan(values: Sequence, N: int) -> KroneckerScan:
    """Exact ``D_n = det(v_(j+l))_{n x n}`` for ``n = 1..N`` and the first index
    from which every computed ``D_n`` vanishes (None if ``D_N != 0``)."""
    if len(values) < 2 * N - 1:
        raise ValueError(f"need {2 * N - 1} values")
    if values and isinstance(values[0], LinearForm):
        dets = tuple(hankel_exact(values, n) for n in range(1, N + 1))
        zero = [d.is_zero() for d in dets]
    else:
        dets = tuple(hankel_rational(values, n) for n in range(1, N + 1))
        zero = [d == 0 for d in dets]
    first = None
    for n in range(N, 0, -1):
        if not zero[n - 1]:
            break
        first = n
    return KroneckerScan(dets, first)


# --------------------------------------------------------------------------
# Stuttering
# --------------------------------------------------------------------------


def stutter(seq: Sequence, k: int, length: Optional[int] = None) -> list:
    """``hat r_n = r_(n // k)``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    length = k * len(seq) if length is None else length
    return [seq[n // k] for n in range(length)]


def stutter_genfn_check(seq: Sequence, k: int, ncoeffs: int) -> bool:
    """Coefficientwise check of
    ``sum hat r_n z^n = (1 + z + ... + z^(k-1)) * sum r_n z^(kn)`` up to ``z^(ncoeffs-1)``.
    """
    if len(seq) * k < ncoeffs:
        raise ValueError("sequence too short for the requested coefficients")
    lhs = stutter(seq, k, ncoeffs)
    # sparse series sum r_n z^(kn), times the geometric block
    spread = {k * n: r for n, r in enumerate(seq) if k * n < ncoeffs}
    rhs = []
    for m in range(ncoeffs):
        terms = [spread[m - i] for i in range(k) if (m - i) in spread]
        acc = terms[0]
        for t in terms[1:]:
            acc = acc + t
        rhs.append(acc)
    return all(_exact_eq(a, b) for a, b in zip(lhs, rhs))


def stutter_vandermonde(z: Sequence, k: int):
    """``det(z_j^floor((j+l)/k))`` exactly."""
    n = len(z)
    return det_exact([[as_rational(z[j]) ** ((j + l) // k) for l in range(n)] for j in range(n)])


@dataclass(frozen=True)
class StutterStructure:
    n: int
    k: int
    monomial: tuple          # exponent e_j with z_j^e_j dividing the determinant
    pairs: tuple             # (j, l) with (z_j - z_l) dividing the determinant
    at_one: tuple            # j with (z_j - 1) dividing the determinant
    constant_quotient: Optional[Fraction]   # det / (monomial * both products), if constant
    identically_zero: bool = False

    def as_dict(self) -> dict:
        q = self.constant_quotient
        return {"n": self.n, "k": self.k, "identically_zero": self.identically_zero,
                "monomial": list(self.monomial),
                "pairs": [list(p) for p in self.pairs], "at_one": list(self.at_one),
                "constant_quotient": None if q is None else rational_str(q)}


def stutter_structure(n: int, k: int, rng: Optional[random.Random] = None,
                      trials: int = 4) -> StutterStructure:
    """Empirical factor structure of the ``k``-stuttering Vandermonde determinant.

    With the other points random, the exact cofactor expansion along row ``j``
    gives the lowest power of ``z_j`` present; a pair ``(j, l)`` is listed when
    the determinant vanishes at ``z_j = z_l`` in every trial, and an index ``j``
    when it vanishes at ``z_j = 1``.  The quotient by the monomial and the
    two products is evaluated at ``trials`` random points
    and reported when it is the same rational each time.  Nothing here is a
    proof; it is a table for small ``n, k``.
    """
    if k < 1 or n < 1:
        raise ValueError("need n >= 1 and k >= 1")
    rng = rng or random.Random(n * 1009 + k)

    def point():
        # distinct points: a repeated value in one residue class forces a zero
        while True:
            z = [Fraction(rng.randint(2, 10 ** 4), rng.randint(1, 10 ** 4)) for _ in range(n)]
            if len(set(z)) == n:
                return z

    if all(stutter_vandermonde(point(), k) == 0 for _ in range(trials)):
        return StutterStructure(n, k, (), (), (), None, True)
    monomial = []
    for j in range(n):
        z = point()
        coeff = {}
        for l in range(n):
            minor = [[z[r] ** ((r + c) // k) for c in range(n) if c != l]
                     for r in range(n) if r != j]
            p = (j + l) // k
            coeff[p] = coeff.get(p, 0) + (-1) ** (j + l) * det_exact(minor)
        nonzero = [p for p, c in coeff.items() if c != 0]
        monomial.append(min(nonzero))
    pairs = []
    for j in range(n):
        for l in range(j + 1, n):
            vanishes = True
            for _ in range(trials):
                z = point()
                z[l] = z[j]
                if stutter_vandermonde(z, k) != 0:
                    vanishes = False
                    break
            if vanishes:
                pairs.append((j, l))
    at_one = []
    for j in range(n):
        zs = [point() for _ in range(trials)]
        for z in zs:
            z[j] = Fraction(1)
        if all(len(set(z)) < n or stutter_vandermonde(z, k) == 0 for z in zs):
            at_one.append(j)
    quotients = set()
    for _ in range(trials):
        z = point()
        denom = Fraction(1)
        for j in at_one:
            denom *= z[j] - 1
        for j, e in enumerate(monomial):
            denom *= z[j] ** e
        for j, l in pairs:
            denom *= z[l] - z[j]
        quotients.add(stutter_vandermonde(z, k) / denom)
    q = quotients.pop() if len(quotients) == 1 else None
    return StutterStructure(n, k, tuple(monomial), tuple(pairs), tuple(at_one), q)


def _exact_eq(a, b) -> bool:
    if isinstance(a, LinearForm):
        return (a.xi, a.a, a.b, a.scale) == (b.xi, b.a, b.b, b.scale)
    return a == b


# --------------------------------------------------------------------------
# Numeric Hankel determinants
# --------------------------------------------------------------------------


def precision_policy(n: int, eps) -> int:
    """Bits needed for an ``n x n`` Hankel determinant of size ``(eps/4)^(n^2)``."""
    return max(256, int(math.ceil(n * n * math.log2(4 / float(eps)))) + 64 * n)


def hankel_numeric(values: Sequence, n: int, precision: int, guard_bits: int = 64) -> BigFloat:
    """Determinant by partially pivoted elimination at ``precision`` bits.

    The bits lost to cancellation are estimated as
    ``log2(prod of row norms / |det|)`` (Hadamard); if fewer than
    ``guard_bits`` remain, PrecisionExhausted is raised.
    """
    if n < 1:
        return BigFloat(mp.mpf(1), precision, mp.mpf(0))
    with mp.workprec(precision):
        vals = [v.value if isinstance(v, BigFloat) else mp.mpf(v) for v in values[: 2 * n - 1]]
        M = [[vals[j + l] for l in range(n)] for j in range(n)]
        norms = [mp.sqrt(mp.fsum(x * x for x in row)) for row in M]
        det = mp.mpf(1)
        for k in range(n):
            p = max(range(k, n), key=lambda i: abs(M[i][k]))
            if M[p][k] == 0:
                return BigFloat(mp.mpf(0), precision, None)
            if p != k:
                M[k], M[p] = M[p], M[k]
                det = -det
            det *= M[k][k]
            for i in range(k + 1, n):
                f = M[i][k] / M[k][k]
                for j in range(k + 1, n):
                    M[i][j] -= f * M[k][j]
        hadamard = mp.fprod(norms)
        if det == 0 or hadamard == 0:
            return BigFloat(det, precision, None)
        lost = float(mp.log(hadamard / abs(det), 2))
        if lost > precision - guard_bits:
            raise PrecisionExhausted(
                f"n={n}: about {lost:.0f} bits cancel, only {precision} available")
        err = abs(det) * mp.ldexp(1, int(math.ceil(lost)) - precision + 2 * n.bit_length() + 4)
    return BigFloat(det, precision, err)


# --------------------------------------------------------------------------
# Heine's identity
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HeineReport:
    family: str
    n: int
    determinant: BigFloat
    integral: BigFloat
    integral_err: BigFloat
    agree_digits: float
    agree: bool


def _unit_pullback(spec: FamilySpec, prec: int):
    """``(z(u), density)`` for a 1D family pulled back to [0, 1].

    The substitutions ``x = a^u`` (log families) and ``t = tan(pi u / 4)``
    (the real pi family) make both ``z`` and the density entire in ``u``, so
    the tanh-sinh error is not throttled by poles just outside the interval.
    """
    if spec.m != 1:
        raise ValueError("the n-fold integral path is for one-dimensional families")
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        if spec.xi.kind == "log":
            a = mpfr(spec.xi.arg.numerator) / spec.xi.arg.denominator
            la = gmpy2.log(a)

            def z(u):
                return gmpy2.expm1(la * u) * gmpy2.expm1(la * (1 - u))
            return z, la
        if spec.name == "pi_real":
            r2, half_pi = gmpy2.sqrt(mpfr(2)), gmpy2.const_pi() / 2

            def z(u):
                phi = half_pi * u
                return r2 * (gmpy2.sin(phi) + gmpy2.cos(phi) - 1)
            return z, half_pi / 2
    raise ValueError(f"no unit-interval form for {spec.name}")


def heine_integrand(spec: FamilySpec, n: int, prec: int = 256) -> Integrand:
    """``(1/n!) prod_{j<l} (z_l - z_j)^2 prod omega`` on ``[0,1]^n``."""
    z_raw, dens = _unit_pullback(spec, prec)
    cache: dict = {}

    def z(u):
        # the same tanh-sinh nodes recur in every fibre; the pilot pass runs
        # at a lower precision, hence the precision in the key
        key = (u, gmpy2.get_context().precision)
        v = cache.get(key)
        if v is None:
            v = cache[key] = z_raw(u)
        return v

    with gmpy2.context(gmpy2.get_context(), precision=prec):
        scale = dens ** n / factorial(n)
    if n == 1:
        return Integrand(lambda u, ul, ur: dens, 1, f"heine {spec.name} n=1")
    if n == 2:
        def f2(u1, c1):
            z1 = z(u1)

            def g(u2, c2):
                d = z(u2) - z1
                return scale * d * d
            return g
        return Integrand(f2, 2, f"heine {spec.name} n=2")
    if n == 3:
        def f3(u1, c1):
            z1 = z(u1)

            def g(u2, c2):
                z2 = z(u2)
                w12 = scale * (z2 - z1) ** 2

                def h(u3, c3):
                    z3 = z(u3)
                    return w12 * ((z3 - z1) * (z3 - z2)) ** 2
                return h
            return g
        return Integrand(f3, 3, f"heine {spec.name} n=3")
    raise ValueError("the n-fold integral path handles n <= 3")


def heine_verify(fam: str | FamilySpec, n: int, precision: int = 112) -> HeineReport:
    """Both sides of Heine's identity: the exact Hankel determinant of the
    family's forms and the n-fold integral with squared Vandermonde weight."""
    spec = family(fam) if isinstance(fam, str) else fam
    if not 1 <= n <= 3:
        raise ValueError("n must be 1, 2 or 3")
    forms = [spec.form(k) for k in range(2 * n - 1)]
    det = hankel_exact(forms, n).evaluate(precision + 32)
    f = heine_integrand(spec, n, precision + 64)
    q = integrate_1d(f, 0, 1, precision) if n == 1 else integrate_nd(f, precision, smooth=True)
    with mp.workprec(precision + 32):
        diff = abs(det.value - q.value.value)
        digits = float(-mp.log10(diff / abs(det.value))) if diff else float("inf")
        ok = diff <= 2 * q.err_estimate.value + det.err
    return HeineReport(spec.name, n, det, q.value, q.err_estimate, digits, bool(ok))


# --------------------------------------------------------------------------
# Hankel tables for families
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HankelReport:
    n: int
    exact: Optional[PolyForm]
    numeric: BigFloat
    normalized: float
    cleared_factor: Optional[int] = None
    cleared: Optional[tuple] = field(default=None)

    @property
    def denominator_cleared(self) -> bool:
        return self.cleared is not None


def delta_product(spec: FamilySpec, n: int) -> int:
    """``delta_(n-1) delta_n ... delta_(2n-2)``."""
    out = 1
    for k in range(n - 1, 2 * n - 1):
        out *= spec.delta(k)
    return out


def hankel_table(fam: str | FamilySpec, nmax: int, precision: Optional[int] = None,
                 with_numeric: bool = True) -> list[HankelReport]:
    """Exact Hankel determinants ``R_1..R_nmax`` of an exact family, their
    high-precision values, the normalized exponent ``log R_n / n^2`` and the
    integer witness for ``delta_(n-1)...delta_(2n-2) R_n``.

    With ``with_numeric`` the evaluated forms also go through
    :func:`hankel_numeric` at the precision policy and must agree.
    """
    spec = family(fam) if isinstance(fam, str) else fam
    if not spec.exact:
        raise ValueError(f"{spec.name} has no exact forms; use numeric_hankel_table")
    forms = [spec.form(k) for k in range(2 * nmax - 1)]
    eps = spec.epsilon(64)
    rows = []
    for n in range(1, nmax + 1):
        bits = precision or precision_policy(n, eps)
        poly = hankel_exact(forms, n)
        value = poly.evaluate(bits)
        if with_numeric:
            num = hankel_numeric([f.evaluate(bits + 64) for f in forms], n, bits + 64)
            with mp.workprec(bits):
                if abs(num.value - value.value) > num.err + value.err:
                    raise ArithmeticError(f"exact and numeric R_{n} disagree for {spec.name}")
        factor = delta_product(spec, n)
        with mp.workprec(bits):
            normalized = float(mp.log(abs(value.value)) / (n * n)) if value.value else float("-inf")
        rows.append(HankelReport(n, poly, value, normalized, factor, poly.cleared(factor)))
    return rows


def numeric_hankel_table(values: Sequence[BigFloat], nmax: int, precision: int) -> list[HankelReport]:
    rows = []
    for n in range(1, nmax + 1):
        v = hankel_numeric(values, n, precision)
        with mp.workprec(precision):
            normalized = float(mp.log(abs(v.value)) / (n * n)) if v.value else float("-inf")
        rows.append(HankelReport(n, None, v, normalized))
    return rows


# --------------------------------------------------------------------------
# Orthogonal polynomials
# --------------------------------------------------------------------------


def _as_ring(m):
    if isinstance(m, LinearForm):
        return PolyForm.from_form(m)
    if isinstance(m, PolyForm):
        return m
    return as_rational(m)


def orthopoly(moments: Sequence, n: int) -> list:
    """Coefficients ``[c_0, ..., c_n]`` of ``p_n(z)``: the Hankel determinant
    ``R_(n+1)`` with its last row replaced by ``1, z, ..., z^n``.

    No monic rescaling.  Coefficients are Fractions for rational moments and
    PolyForms in xi for linear-form moments.

    Raises
    ------
    DegenerateMoments
        If ``R_n`` (the coefficient of ``z^n``) vanishes.
    """
    if n == 0:
        return [Fraction(1)]
    if len(moments) < 2 * n:
        raise ValueError(f"need moments 0..{2 * n - 1}")
    ms = list(moments[: 2 * n])
    if isinstance(ms[0], LinearForm):
        _common_xi(ms)
        ms, stripped = _strip_sqrt2(ms)
        if stripped:
            raise ValueError("orthopoly expects moments without sqrt(2) tags")
    ring = [_as_ring(m) for m in ms]
    rows = [[ring[j + l] for l in range(n + 1)] for j in range(n)]
    coeffs = []
    for col in range(n + 1):
        minor = [[row[l] for l in range(n + 1) if l != col] for row in rows]
        d = det_exact(minor)
        coeffs.append(d if (n + col) % 2 == 0 else -d)
    if _is_zero(coeffs[-1]):
        raise DegenerateMoments(f"leading Hankel determinant R_{n} vanishes")
    return coeffs


def orthogonality_residuals(coeffs: Sequence, moments: Sequence, kmax: int) -> list:
    """``<p, z^k> = sum_j c_j m_(k+j)`` for ``k < kmax``, exactly."""
    ring = [_as_ring(m) for m in moments]
    out = []
    for k in range(kmax):
        acc = None
        for j, c in enumerate(coeffs):
            term = c * ring[k + j] if isinstance(c, PolyForm) else ring[k + j] * c \
                if isinstance(ring[k + j], PolyForm) else c * ring[k + j]
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def monic(coeffs: Sequence) -> list:
    """Monic view of a rational ``p_n``."""
    lead = coeffs[-1]
    return [Fraction(c) / lead for c in coeffs]


def random_rationals(rng: random.Random, count: int, bound: int = 50) -> list[Fraction]:
    return [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(count)]
