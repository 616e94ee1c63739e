"""The eleven acceptance criteria, each at its stated tolerance and runtime.

Each test records one PASS/FAIL line (printed, and repeated in the terminal
summary) and then asserts, so a failing criterion stays red.
"""

import random
import time
from fractions import Fraction

import mpmath as mp
import pytest

from conftest import record
from irratio.criteria import (Verdict, catalan_verdict, counterexample_demo, family_verdict,
                              published_constants, truncate4)
from irratio.exactnum import lcm_upto
from irratio.fekete import diameter_table, max_vandermonde
from irratio.forms import (catalan_snap_report, family, log_form, pi_form, validate_beukers,
                           zeta_q3)
from irratio.hankel import (hankel_exact, hankel_numeric, heine_verify, kronecker_scan,
                            orthogonality_residuals, orthopoly, precision_policy,
                            random_rationals, scaling_check, stutter_genfn_check,
                            vandermonde_det, vandermonde_matrix_det)

pytestmark = pytest.mark.acceptance


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def finish(k, checks, clock, limit, extra=""):
    failed = [name for name, ok in checks if not ok]
    in_time = clock.seconds < limit
    ok = not failed and in_time
    detail = f"{clock.seconds:.1f}s (limit {limit:g}s)"
    if failed:
        detail += "; failed: " + ", ".join(failed)
    if extra:
        detail += "; " + extra
    record(k, ok, detail)
    assert not failed, failed
    assert in_time, detail


def test_criterion_01_constants():
    expected = ["0.4663", "0.6004", "0.5857", "0.6563", "0.4527", "0.6624"]
    with Clock() as c:
        got = [truncate4(v) for _, _, v, _ in published_constants(128)]
    finish(1, [(f"{g} vs {e}", g == e) for g, e in zip(got, expected)], c, 1)


def test_criterion_02_integrality():
    checks = []
    with Clock() as c:
        for a in (2, 3):
            checks.append((f"log{a}", all(log_form(a, n).clears(lcm_upto(n)) for n in range(21))))
        ok = True
        for n in range(21):
            u, v = pi_form(n).reduce(n)
            ok &= u.denominator == 1 and v.denominator == 1
        checks.append(("pi", ok))
    finish(2, checks, c, 10)


def test_criterion_03_heine():
    checks, digits = [], []
    with Clock() as c:
        for name in ("log2", "log3", "pi_real"):
            for n in (2, 3):
                r = heine_verify(name, n, 112)
                digits.append(f"{name}/{n}:{r.agree_digits:.0f}")
                checks.append((f"{name} n={n}", r.agree_digits >= 30))
    finish(3, checks, c, 60, "digits " + " ".join(digits))


def test_criterion_04_hankel_decay():
    spec = family("log3")
    with Clock() as c:
        eps = spec.epsilon(64)
        forms = [spec.form(k) for k in range(23)]
        values, exps = [], []
        for n in range(1, 13):
            bits = precision_policy(n, eps)
            R = hankel_exact(forms, n).evaluate(bits)
            num = hankel_numeric([f.evaluate(bits + 64) for f in forms[:2 * n - 1]], n, bits + 64)
            values.append((R, num))
            with mp.workprec(bits):
                exps.append(mp.log(R.value) / n ** 2)
        with mp.workprec(64):
            target = mp.log(eps / 4)
        gap = abs(exps[-1] - target)
        trend = [exps[k] > exps[k + 1] for k in range(5, 11)]
    checks = [("R_n > 0", all(R.value > 0 for R, _ in values)),
              ("numeric agrees", all(abs(R.value - v.value) <= R.err + v.err for R, v in values)),
              ("monotone n=6..12", all(trend)),
              ("within 0.15 at n=12", gap < 0.15)]
    finish(4, checks, c, 300, f"log R_12/144 = {float(exps[-1]):.4f}, target {float(target):.4f}, "
                              f"gap {float(gap):.3f}")


def test_criterion_05_verdicts():
    checks = []
    with Clock() as c:
        v = {name: family_verdict(name, nmax=0) for name in ("log2", "log3", "pi_real",
                                                             "zeta2", "zeta3")}
        checks.append(("prop1 log2", v["log2"].prop1 is Verdict.PASS))
        checks.append(("prop1 log3 fails", v["log3"].prop1 is Verdict.FAIL))
        checks.append(("prop1 pi_real fails", v["pi_real"].prop1 is Verdict.FAIL))
        for name in ("log3", "pi_real", "zeta2", "zeta3"):
            checks.append((f"prop2 {name}", v[name].prop2 is Verdict.PASS))
        cat = catalan_verdict(nmax=4, precision=160)
        checks.append(("catalan fails both", cat.verdict.prop1 is Verdict.FAIL
                       and cat.verdict.prop2 is Verdict.FAIL))
        demo = counterexample_demo(6)
        q, verdict = demo.geometric_prop2
        checks.append(("sqrt(2)/4 < 1", verdict is Verdict.PASS
                       and abs(q - mp.sqrt(2) / 4) < mp.mpf(10) ** -10))
        checks.append(("Hankel vanishing from n=2", demo.geometric_scan.first_vanishing == 2
                       and all(d == 0 for d in demo.geometric_scan.dets[1:])))
        q, verdict = demo.lebesgue_prop2
        checks.append(("e^(3/2)/4 > 1", verdict is Verdict.FAIL
                       and abs(q - mp.e ** 1.5 / 4) < mp.mpf(10) ** -10))
    finish(5, checks, c, 30)


def test_criterion_06_fekete():
    with Clock() as c:
        d2 = max_vandermonde(2, precision=96).normalized.value
        d3 = max_vandermonde(3, precision=96).normalized.value
        rows = diameter_table(20, precision=80)
    vals = [v.value for _, v in rows]
    with mp.workprec(96):
        checks = [("delta_2 = 1", abs(d2 - 1) < mp.mpf(10) ** -10),
                  ("delta_3 = (1/16)^(1/6)", abs(d3 - mp.root(mp.mpf(1) / 16, 6)) < mp.mpf(10) ** -10),
                  ("non-increasing", all(a >= b for a, b in zip(vals, vals[1:]))),
                  (">= 0.25", all(v >= 0.25 for v in vals)),
                  ("delta_20 < 0.30", vals[-1] < 0.30)]
    finish(6, checks, c, 120, f"delta_20 = {mp.nstr(vals[-1], 8)}")


def test_criterion_07_kronecker_identities():
    rng = random.Random(7)
    with Clock() as c:
        geo = kronecker_scan([Fraction(1, 2 ** k) for k in range(11)], 6)
        lin = kronecker_scan([Fraction(k + 1) for k in range(11)], 6)
        vdm = all(vandermonde_det(z) == vandermonde_matrix_det(z)
                  for z in (random_rationals(rng, rng.randint(2, 6)) for _ in range(100)))
        scl = True
        for _ in range(100):
            n = rng.randint(1, 6)
            cst = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
            scl &= scaling_check(random_rationals(rng, 2 * n - 1), cst, n)
        forms = [family("log2").form(j) for j in range(25)]
        stu = all(stutter_genfn_check(forms, k, 50) for k in (2, 3, 5))
    checks = [("1/2^k vanishes from 2", geo.first_vanishing == 2 and all(d == 0 for d in geo.dets[1:])),
              ("k+1 vanishes from 3", lin.first_vanishing == 3 and all(d == 0 for d in lin.dets[2:])),
              ("vandermonde x100", vdm), ("scaling x100", scl), ("stutter k=2,3,5", stu)]
    finish(7, checks, c, 10)


def test_criterion_08_beukers():
    checks, worst = [], {}
    with Clock() as c:
        for kind, nmax in (("zeta2", 6), ("zeta3", 4)):
            for n in range(nmax + 1):
                r = validate_beukers(kind, n, 30)
                worst[kind] = min(worst.get(kind, 99.0), r.agree_digits)
                checks.append((f"{kind} n={n} digits", r.agree_digits >= 30))
                checks.append((f"{kind} n={n} integers",
                               all(isinstance(x, int) for x in r.cleared)))
    finish(8, checks, c, 600, ", ".join(f"{k} >= {v:.1f} digits" for k, v in worst.items()))


def test_criterion_09_catalan_snap():
    checks = []
    with Clock() as c:
        for n in range(5):
            r = catalan_snap_report(n)
            checks.append((f"n={n} residual", r.residual < mp.mpf(10) ** -50))
            checks.append((f"n={n} re-verified", r.verify_residual < mp.mpf(10) ** -50))
            checks.append((f"n={n} 200-digit G", r.precision * mp.log10(2) >= 200))
    finish(9, checks, c, 600)


def test_criterion_10_zeta_q():
    checks = []
    with Clock() as c:
        for q in (Fraction(1, 2), Fraction(1, 3), Fraction(-1, 2)):
            vals = [zeta_q3(q, 200, form) for form in (1, 2, 3)]
            with mp.workprec(200):
                spread = max(abs(a.value - b.value) for a in vals for b in vals)
                checks.append((f"q={q}", spread < mp.mpf(10) ** -50 * abs(vals[0].value)))
    finish(10, checks, c, 5)


def test_criterion_11_orthogonality():
    checks = []
    with Clock() as c:
        for n in range(1, 9):
            leb = [Fraction(1, k + 1) for k in range(2 * n + 1)]
            p = orthopoly(leb, n)
            checks.append((f"lebesgue n={n}", all(r == 0 for r in orthogonality_residuals(p, leb, n))))
            logm = [family("log2").form(k) for k in range(2 * n + 1)]
            q = orthopoly(logm, n)
            checks.append((f"log2 n={n}", all(r.is_zero() for r in orthogonality_residuals(q, logm, n))))
    finish(11, checks, c, 30)
