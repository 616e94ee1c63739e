"""Double-exponential (tanh-sinh) quadrature at arbitrary precision.

One rule covers all integrals of the package: smooth integrands, algebraic
endpoint singularities such as ``t^(-1/2)``, and the logarithmic corner
singularities of the Beukers kernels.

Integrands are precision-agnostic callables over :mod:`gmpy2` ``mpfr``
values, so the integrator can re-evaluate them at any working precision.
Every node is handed to the integrand together with its exact distance to
the interval ends; integrands should use those distances instead of forming
``1 - x`` (which cancels catastrophically at the endpoints).

* 1D on ``[lo, hi]``: ``f(x, x - lo, hi - x) -> value``
* nD on ``[0, 1]^d``: curried, ``f(x, 1 - x)`` returns the integrand in the
  remaining variables, down to a scalar, so factors of the outer variables
  are computed once per outer node.

Multi-dimensional integrals are iterated 1D rules.  Each inner fibre refines
its own level until its contribution, weighted by the outer quadrature
weight, is below the share of the error budget it is allowed.  Kernels such
as ``1/(1 - xy)`` put a pole close to the end of the inner interval when the
outer node approaches the boundary; only those fibres pay for deep levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import gmpy2
import mpmath as mp
from gmpy2 import mpfr

from .exactnum import BigFloat

GUARD_BITS = 32
BITS_PER_LEVEL = 8
MAX_LEVEL_1D = 12
MAX_LEVEL_ND = 10
MIN_LEVEL = 2
INNER_EXTRA_LEVELS = 4
PILOT_LEVEL = 2


class NonConvergence(ArithmeticError):
    """Level cap reached before two consecutive levels agreed."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class Integrand:
    """A named integrand over ``dim`` variables (see module docstring)."""

    fn: Callable
    dim: int = 1
    name: str = ""


@dataclass(frozen=True)
class QuadResult:
    value: BigFloat
    err_estimate: BigFloat
    levels: int
    history: tuple = field(default=(), compare=False)
    evaluations: int = field(default=0, compare=False)

    def __float__(self):
        return float(self.value)


def working_precision(target_bits: int, max_level: int) -> int:
    """Guarded precision for a run that may refine up to ``max_level``."""
    return target_bits + GUARD_BITS + BITS_PER_LEVEL * max_level


def bits_for_digits(digits: int) -> int:
    return int(math.ceil(digits * math.log2(10)))


def to_mpf(x: mpfr, prec: int) -> mp.mpf:
    """Exact conversion of a gmpy2 mpfr into an mpmath mpf."""
    if gmpy2.is_zero(x):
        return mp.mpf(0)
    if not gmpy2.is_finite(x):
        return mp.mpf(float(x))
    man, exp = x.as_mantissa_exp()
    with mp.workprec(max(prec, x.precision)):
        return mp.mpf((int(man), int(exp)))


def to_mpfr(x) -> mpfr:
    """mpmath mpf / Fraction / int -> mpfr at the current gmpy2 precision."""
    if isinstance(x, Fraction):
        return mpfr(x.numerator) / x.denominator
    if isinstance(x, mp.mpf):
        man, exp = x.man_exp
        return gmpy2.mul_2exp(mpfr(man), exp) if man else mpfr(0)
    return mpfr(x)


@lru_cache(maxsize=256)
def level_nodes(level: int, prec: int, depth_lo: int, depth_hi: int) -> tuple:
    """Nodes ``(x, 1 - x, w)`` on [0, 1] that are new at ``level``.

    Level 0 has step 1 and all integer abscissae; level ``k`` adds the odd
    multiples of ``2^-k``.  ``x = 1 / (1 + exp(-pi sinh s))`` and ``1 - x``
    each come from their own closed form.  Nodes closer than ``2^-depth`` to
    an end are dropped.  Weights include the step, so the level-k sum is
    ``half the level-(k-1) sum + sum over the new nodes``.
    """
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        h = gmpy2.mul_2exp(mpfr(1), -level)
        pi = gmpy2.const_pi()
        nodes = []
        if level == 0:
            nodes.append((mpfr("0.5"), mpfr("0.5"), pi * h / 4))
            j, step = 1, 1
        else:
            j, step = 1, 2
        floor_lo = gmpy2.mul_2exp(mpfr(1), -depth_lo)
        floor_hi = gmpy2.mul_2exp(mpfr(1), -depth_hi)
        going_lo = going_hi = True
        while going_lo or going_hi:
            s = j * h
            e = gmpy2.exp(-pi * gmpy2.sinh(s))
            big = 1 / (1 + e)
            small = e / (1 + e)
            w = pi * h * gmpy2.cosh(s) * big * small
            if going_hi:
                if small > floor_hi:
                    nodes.append((big, small, w))
                else:
                    going_hi = False
            if going_lo:
                if small > floor_lo:
                    nodes.append((small, big, w))
                else:
                    going_lo = False
            j += step
        return tuple(nodes)


def _depths(prec: int, singular: tuple[bool, bool]) -> tuple[int, int]:
    # t^(-1/2)-type ends need nodes down to 2^(-2 prec): weight*value ~ t^(1/2)
    return tuple(2 * prec if s else prec for s in singular)


class _Nested:
    """Iterated adaptive tanh-sinh over the unit cube."""

    def __init__(self, prec, singular, max_level, min_level=MIN_LEVEL, smooth=False):
        self.prec = prec
        self.smooth = smooth
        self.depths = [_depths(prec, s) for s in singular]
        # fibres next to a boundary pole may need more levels than the outer axis
        self.max_level = max_level + INNER_EXTRA_LEVELS
        self.min_level = min_level
        self.evaluations = 0

    def fibre(self, fn, axis: int, tol):
        """Integrate the curried ``fn`` over axes ``axis..`` to absolute ``tol``."""
        last = axis == len(self.depths) - 1
        lo, hi = self.depths[axis]
        total = prev = None
        for level in range(self.max_level + 1):
            nodes = level_nodes(level, self.prec, lo, hi)
            acc = mpfr(0)
            if last:
                for x, xc, w in nodes:
                    acc += w * fn(x, xc)
                self.evaluations += len(nodes)
            else:
                share = tol / (4 * len(nodes))
                for x, xc, w in nodes:
                    acc += w * self.fibre(fn(x, xc), axis + 1, share / w)
            total = acc if total is None else total / 2 + acc
            if level >= self.min_level and _settled(total, abs(total - prev), tol, self.smooth):
                return total
            prev = total
        raise NonConvergence(f"inner fibre on axis {axis} hit level cap {self.max_level}")


def _settled(total, diff, tol, smooth) -> bool:
    """Absolute stopping test.

    With ``smooth`` the integrand is analytic on a neighbourhood of the closed
    box, the error roughly squares per level, and the newest sum is accepted
    once its predicted error ``diff^2 / |total|`` is below ``tol`` (only in the
    asymptotic regime ``diff < 2^-8 |total|``).
    """
    if diff <= tol:
        return True
    if not smooth or total == 0:
        return False
    mag = abs(total)
    return diff <= gmpy2.mul_2exp(mag, -8) and diff * diff <= tol * mag


def _predicted(total, diff, smooth):
    if not smooth or total == 0:
        return diff
    return gmpy2.mul_2exp(diff * diff / abs(total), 4)


def _tensor(fn, axes):
    nodes, rest = axes[0], axes[1:]
    total = mpfr(0)
    for x, xc, w in nodes:
        total += w * (fn(x, xc) if not rest else _tensor(fn(x, xc), rest))
    return total


def _pilot(fn, singular, prec=96):
    """Rough magnitude from a full tensor rule through ``PILOT_LEVEL``."""
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        # the union of levels 0..K, with each level's weights rescaled to step 2^-K
        scaled = []
        for s in singular:
            lo, hi = _depths(prec, s)
            out = []
            for k in range(PILOT_LEVEL + 1):
                f = gmpy2.mul_2exp(mpfr(1), -(PILOT_LEVEL - k)) if k else \
                    gmpy2.mul_2exp(mpfr(1), -PILOT_LEVEL)
                out.extend((x, xc, w * f) for x, xc, w in level_nodes(k, prec, lo, hi))
            scaled.append(tuple(out))
        return abs(_tensor(fn, scaled))


def _finish(total, diff, budget, level, prec, history, evaluations) -> QuadResult:
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        rounding = gmpy2.mul_2exp(abs(total), -(prec - 16))
        est = diff + budget + rounding
    return QuadResult(BigFloat(to_mpf(total, prec), prec, to_mpf(est, prec)),
                      BigFloat(to_mpf(est, prec), prec, mp.mpf(0)),
                      level, tuple(float(d) for d in history), evaluations)


def _outer(new_sum, target_bits, prec, max_level, label, smooth=False):
    """Top-level refinement with the relative stopping rule."""
    total = prev = None
    history = []
    for level in range(max_level + 1):
        acc = new_sum(level)
        total = acc if total is None else total / 2 + acc
        if prev is not None:
            diff = abs(total - prev)
            history.append(diff)
            scale = abs(total) if total != 0 else mpfr(1)
            if level >= MIN_LEVEL and _settled(total, diff, gmpy2.mul_2exp(scale, -target_bits), smooth):
                return level, total, _predicted(total, diff, smooth), history
        prev = total
    raise NonConvergence(
        f"{label}: level cap {max_level} reached, last difference {float(history[-1]):.3g}",
        (level, total, history[-1], history))


def integrate_1d(f: Integrand | Callable, lo, hi, precision: int = 128,
                 singular_lo: bool = False, singular_hi: bool = False,
                 max_level: int = MAX_LEVEL_1D) -> QuadResult:
    """Integrate ``f(x, x - lo, hi - x)`` over ``[lo, hi]``.

    ``lo``/``hi`` are ints, Fractions or mpmath numbers (taken exactly).
    ``precision`` is the target in bits: refinement stops once two
    consecutive levels agree to ``2^-precision`` relative to the value.

    Raises
    ------
    NonConvergence
        If ``max_level`` is reached first.
    """
    fn = f.fn if isinstance(f, Integrand) else f
    label = getattr(f, "name", "") or "integrate_1d"
    prec = working_precision(precision, max_level)
    depth_lo, depth_hi = _depths(prec, (singular_lo, singular_hi))
    count = [0]
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        a, b = to_mpfr(lo), to_mpfr(hi)
        if not a < b:
            raise ValueError("need lo < hi")
        width = b - a

        def new_sum(level):
            nodes = level_nodes(level, prec, depth_lo, depth_hi)
            count[0] += len(nodes)
            acc = mpfr(0)
            for t, tc, w in nodes:
                acc += w * fn(a + width * t, width * t, width * tc)
            return width * acc

        try:
            level, total, diff, history = _outer(new_sum, precision, prec, max_level, label)
        except NonConvergence as exc:
            level, total, diff, history = exc.result
            exc.result = _finish(total, diff, 0, level, prec, history, count[0])
            raise
        return _finish(total, diff, mpfr(0), level, prec, history, count[0])


def integrate_nd(f: Integrand, precision: int = 96,
                 singular: Sequence[tuple[bool, bool]] | None = None,
                 max_level: int = MAX_LEVEL_ND, smooth: bool = False) -> QuadResult:
    """Integrate a curried integrand over the unit cube ``[0, 1]^d``, d in {2, 3}.

    ``singular`` holds one ``(singular_lo, singular_hi)`` pair per axis and
    defaults to no flagged ends.  Inner fibres share an absolute error budget
    of ``2^-(precision + 8)`` times a pilot estimate of the magnitude; the
    outer level stops on the same relative rule as :func:`integrate_1d`.

    ``smooth=True`` asserts the integrand is analytic on a neighbourhood of
    the closed cube; every level then stops on the predicted (squared)
    error instead of waiting for one more confirming level.
    """
    d = f.dim
    if d not in (2, 3):
        raise ValueError("integrate_nd handles 2 or 3 variables")
    singular = [tuple(s) for s in singular] if singular is not None else [(False, False)] * d
    if len(singular) != d:
        raise ValueError("need one singularity flag pair per axis")
    label = f.name or f"integrate_{d}d"
    prec = working_precision(precision, max_level)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        scale = _pilot(f.fn, singular)
        if scale == 0:
            scale = mpfr(1)
        budget = gmpy2.mul_2exp(mpfr(scale), -(precision + 8))
        nested = _Nested(prec, singular, max_level, smooth=smooth)
        lo, hi = nested.depths[0]

        def new_sum(level):
            nodes = level_nodes(level, prec, lo, hi)
            share = budget / (4 * len(nodes))
            acc = mpfr(0)
            for x, xc, w in nodes:
                acc += w * nested.fibre(f.fn(x, xc), 1, share / w)
            return acc

        try:
            level, total, diff, history = _outer(new_sum, precision, prec, max_level, label, smooth)
        except NonConvergence as exc:
            if isinstance(exc.result, tuple):
                level, total, diff, history = exc.result
                exc.result = _finish(total, diff, budget, level, prec, history, nested.evaluations)
            raise
        return _finish(total, diff, budget, level, prec, history, nested.evaluations)
