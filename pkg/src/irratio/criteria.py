"""The two irrationality criteria, evaluated family by family.

A sequence of forms ``r_n = a_n xi - b_n`` with ``delta_n a_n, delta_n b_n``
integral, ``delta_n^(1/n) -> Delta``, values of ``z`` in ``[0, eps]`` and
non-vanishing Hankel determinants proves ``xi`` irrational when

* ``eps * Delta < 1`` (first criterion), or
* ``eps * Delta^(3/2) / 4 < 1`` (second criterion).

Each verdict comes with the certificate the argument consumes: the decay of
``delta_(n-1) ... delta_(2n-2) |R_n|`` and exact integer witnesses.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath as mp

from .exactnum import lcm_upto
from .forms import FamilySpec, catalan_densified_r, family
from .hankel import (PrecisionExhausted, hankel_numeric, hankel_rational, hankel_table,
                     kronecker_scan)

GUARD = mp.mpf(10) ** -10


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"


def _compare(q) -> Verdict:
    if abs(q - 1) < GUARD:
        return Verdict.INDETERMINATE
    return Verdict.PASS if q < 1 else Verdict.FAIL


def prop1_check(eps, Delta, prec: int = 128) -> tuple[mp.mpf, Verdict]:
    """``eps * Delta`` against 1, with a ``1e-10`` indeterminate band."""
    with mp.workprec(prec):
        eps, Delta = mp.mpf(eps), mp.mpf(Delta)
        if eps <= 0 or Delta <= 0:
            raise ValueError("eps and Delta must be positive")
        q = eps * Delta
        return q, _compare(q)


def prop2_check(eps, Delta, prec: int = 128) -> tuple[mp.mpf, Verdict]:
    """``eps * Delta^(3/2) / 4`` against 1, with a ``1e-10`` indeterminate band."""
    with mp.workprec(prec):
        eps, Delta = mp.mpf(eps), mp.mpf(Delta)
        if eps <= 0 or Delta <= 0:
            raise ValueError("eps and Delta must be positive")
        q = eps * Delta ** mp.mpf(1.5) / 4
        return q, _compare(q)


# the six printed constants and how each is composed
PUBLISHED = (
    ("log2: eps*Delta", "(sqrt(2)-1)^2*e", lambda: (mp.sqrt(2) - 1) ** 2 * mp.e, "0.4663"),
    ("log3: eps*Delta^(3/2)/4", "(sqrt(3)-1)^2*e^(3/2)/4",
     lambda: (mp.sqrt(3) - 1) ** 2 * mp.e ** 1.5 / 4, "0.6004"),
    ("pi_real: eps", "2-sqrt(2)", lambda: 2 - mp.sqrt(2), "0.5857"),
    ("pi_real: eps*Delta^(3/2)/4", "(2-sqrt(2))*e^(3/2)/4",
     lambda: (2 - mp.sqrt(2)) * mp.e ** 1.5 / 4, "0.6563"),
    ("zeta2: eps*Delta^(3/2)/4", "((sqrt(5)-1)/2)^5*e^3/4",
     lambda: ((mp.sqrt(5) - 1) / 2) ** 5 * mp.e ** 3 / 4, "0.4527"),
    ("zeta3: eps*Delta^(3/2)/4", "(sqrt(2)-1)^4*e^(9/2)/4",
     lambda: (mp.sqrt(2) - 1) ** 4 * mp.e ** 4.5 / 4, "0.6624"),
)


def published_constants(prec: int = 128) -> list[tuple[str, str, mp.mpf, str]]:
    """Rows ``(label, closed form, value, printed digits)``."""
    with mp.workprec(prec):
        return [(label, closed, fn(), printed) for label, closed, fn, printed in PUBLISHED]


def truncate4(x) -> str:
    """First four decimals, truncated as printed (``0.4663...``)."""
    k = int(mp.floor(x * 10 ** 4))
    return f"{k // 10 ** 4}.{k % 10 ** 4:04d}"


# --------------------------------------------------------------------------
# Per-family verdicts
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionVerdict:
    family: str
    epsilon_closed: str
    epsilon: mp.mpf
    Delta_closed: str
    Delta: mp.mpf
    prop1_quantity: mp.mpf
    prop1: Verdict
    prop2_quantity: mp.mpf
    prop2: Verdict
    decay_table: tuple = ()           # (n, delta_(n-1)...delta_(2n-2) |R_n|)
    integrality: tuple = ()           # (n, factor, integer coefficients or None)
    notes: str = ""
    z_nonconstant: Optional[bool] = None

    @property
    def prop1_pass(self) -> bool:
        return self.prop1 is Verdict.PASS

    @property
    def prop2_pass(self) -> bool:
        return self.prop2 is Verdict.PASS

    def decay_ratios(self) -> list[float]:
        vals = [v for _, v in self.decay_table]
        return [float(b.value / a.value) for a, b in zip(vals, vals[1:])]

    def tail_decreasing(self) -> bool:
        """Certificate decreases by a factor < 1 per step on the upper half."""
        ratios = self.decay_ratios()
        tail = ratios[len(ratios) // 2:]
        return bool(tail) and all(r < 1 for r in tail)


def family_verdict(fam: str | FamilySpec, nmax: int = 8, precision: Optional[int] = None,
                   prec: int = 128) -> CriterionVerdict:
    """Both criteria for a family, with the ``q = 1`` decay certificate and
    the exact integrality witnesses up to ``nmax`` (exact families only)."""
    spec = family(fam) if isinstance(fam, str) else fam
    eps, Delta = spec.epsilon(prec), spec.Delta(prec)
    q1, v1 = prop1_check(eps, Delta, prec)
    q2, v2 = prop2_check(eps, Delta, prec)
    decay, witnesses, notes = (), (), spec.notes
    if spec.exact and nmax >= 1:
        rows = hankel_table(spec, nmax, precision, with_numeric=False)
        decay = tuple((r.n, abs(r.numeric) * r.cleared_factor) for r in rows)
        witnesses = tuple((r.n, r.cleared_factor, r.cleared) for r in rows)
    return CriterionVerdict(spec.name, spec.epsilon_closed, eps, spec.Delta_closed, Delta,
                            q1, v1, q2, v2, decay, witnesses, notes, z_nonconstant(spec))


def z_nonconstant(spec: FamilySpec, samples: int = 16, seed: int = 0) -> bool:
    """Numeric flag (not a proof) that ``z`` is non-constant on the domain.

    ``z`` is sampled at seeded random interior points of the interval (one
    variable) or of the unit cube; the flag is set when the sampled values
    spread by more than ``1e-20``.
    """
    rng = random.Random(seed)
    dim = spec.m
    lo, hi = spec.interval if dim == 1 else (0, 1)
    with mp.workprec(96):
        vals = []
        for _ in range(samples):
            pt = [lo + (hi - lo) * mp.mpf(rng.uniform(0.01, 0.99)) for _ in range(dim)]
            vals.append(spec.z_fn(*pt))
        return max(vals) - min(vals) > mp.mpf(10) ** -20


# --------------------------------------------------------------------------
# Boundary examples
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleDemo:
    # (i) r_n = 1/2^n: eps = 1/2, Delta = 2
    geometric_prop1: tuple
    geometric_prop2: tuple
    geometric_scan: object
    # (ii) z(x) = x, omega = dx on [0, 1]: eps = 1, delta_n = d_(n+1), Delta = e
    lebesgue_prop2: tuple
    lebesgue_dets: tuple
    lebesgue_growth: tuple = field(default=())


def counterexample_demo(N: int = 6, prec: int = 128) -> CounterexampleDemo:
    """The two boundary examples.

    (i) ``xi = 1``, ``a_n = 1``, ``b_n = (2^n - 1)/2^n`` gives ``r_n = 2^-n``:
    the second criterion's quantity is ``sqrt(2)/4 < 1`` and yet ``1`` is
    rational, because every Hankel determinant from ``n = 2`` on vanishes.

    (ii) Lebesgue moments ``1/(k+1)`` with ``delta_n = lcm(1..n+1)``: the
    quantity ``e^(3/2)/4`` exceeds 1, so the criterion is inconclusive.
    """
    geo = [Fraction(1, 2 ** k) for k in range(2 * N - 1)]
    p1 = prop1_check(mp.mpf(1) / 2, 2, prec)
    p2 = prop2_check(mp.mpf(1) / 2, 2, prec)
    scan = kronecker_scan(geo, N)
    with mp.workprec(prec):
        leb2 = prop2_check(1, mp.e, prec)
    moments = [Fraction(1, k + 1) for k in range(2 * N - 1)]
    dets = tuple(hankel_rational(moments, n) for n in range(1, N + 1))
    with mp.workprec(prec):
        growth = tuple((n, mp.root(lcm_upto(n + 1), n)) for n in (10, 100, 1000))
    return CounterexampleDemo(p1, p2, scan, leb2, dets, growth)


# --------------------------------------------------------------------------
# Catalan
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalanVerdict:
    verdict: CriterionVerdict
    reference: mp.mpf                # (eps/4)^(1/5)
    table: tuple                     # (n, R~_n, R~_n^(1/n^2))
    stopped_at: Optional[int] = None


def catalan_verdict(nmax: int = 8, precision: int = 192, prec: int = 128) -> CatalanVerdict:
    """Both criteria for the Catalan integrals (each fails: ``Delta = 16 e^4``)
    and the densified Hankel table ``R~_n^(1/n^2)`` against ``(eps/4)^(1/5)``.

    The table stops early (``stopped_at``) if numeric elimination runs out of
    guard bits at ``precision``.
    """
    verdict = family_verdict("catalan", 0, prec=prec)
    values = [catalan_densified_r(k, precision) for k in range(2 * nmax - 1)]
    rows, stopped = [], None
    for n in range(1, nmax + 1):
        try:
            R = hankel_numeric(values, n, precision, guard_bits=48)
        except PrecisionExhausted:
            stopped = n
            break
        with mp.workprec(precision):
            rows.append((n, R, mp.root(abs(R.value), n * n)))
    with mp.workprec(prec):
        ref = (verdict.epsilon / 4) ** (mp.mpf(1) / 5)
    return CatalanVerdict(verdict, ref, tuple(rows), stopped)


def delta_growth_evidence(spec: FamilySpec, ns=(20, 50, 100), prec: int = 64):
    """Empirical ``delta_n^(1/n)`` next to the analytic ``Delta`` (evidence only)."""
    with mp.workprec(prec):
        return [(n, mp.root(spec.delta(n), n)) for n in ns], spec.Delta(prec)
