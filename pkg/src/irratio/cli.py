"""Command-line front end: ``irratio {sequence,hankel,criterion,fekete,verify}``.

Every command emits a report envelope (command, parameters, precision,
results, provenance, wall-clock) as an aligned text table, JSON or CSV.

Option values resolve as: built-in default < config file (``key=value``)
< ``IRRATIO_*`` environment variable < command-line flag.

Exit codes: 0 success, 1 usage error, 2 identity failure, 3 precision
exhausted or quadrature non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
import time
from fractions import Fraction
from typing import Optional

import mpmath as mp

from . import criteria, fekete, forms, hankel
from .exactnum import BigFloat, rational_str
from .quad import NonConvergence

EXIT_OK, EXIT_USAGE, EXIT_IDENTITY, EXIT_PRECISION = 0, 1, 2, 3

DEFAULTS = {
    "precision": 50,
    "format": "text",
    "nmax": None,            # per-command default below
    "eps": "1",
    "which": None,
    "k": 2,
    "q": "1/2",
    "n": None,
    "trials": 100,
    "family": None,
    "seed": 0,
}

NMAX_DEFAULT = {"sequence": 5, "hankel": 6, "criterion": 6, "fekete": 10}
VERIFY_CHOICES = ("heine", "vandermonde", "kronecker", "stutter", "scaling", "zetaq")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# Option layering
# --------------------------------------------------------------------------


def read_config(path: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_").lower()] = value
    return out


def resolve(args: argparse.Namespace, env=None) -> dict:
    env = os.environ if env is None else env
    config_path = args.config or env.get("IRRATIO_CONFIG")
    config = read_config(config_path) if config_path else {}
    unknown = set(config) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    opts = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            opts[key] = flag
        elif f"IRRATIO_{key.upper()}" in env:
            opts[key] = env[f"IRRATIO_{key.upper()}"]
        elif key in config:
            opts[key] = config[key]
        else:
            opts[key] = default
    for key in ("precision", "k", "trials", "seed"):
        opts[key] = _int(opts[key], key)
    for key in ("nmax", "n"):
        if opts[key] is not None:
            opts[key] = _int(opts[key], key)
    if opts["nmax"] is None:
        opts["nmax"] = NMAX_DEFAULT.get(args.command)
    if opts["format"] not in ("text", "json", "csv"):
        raise UsageError(f"unknown format {opts['format']!r}")
    if opts["precision"] < 5:
        raise UsageError("precision must be at least 5 digits")
    return opts


def _int(value, name) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be an integer, got {value!r}") from None


def _rational(value, name) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{name} must be a rational like 3/4 or 0.25, got {value!r}") from None


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * math.log2(10))) + 8


# --------------------------------------------------------------------------
# Encoding
# --------------------------------------------------------------------------


def num(x, digits: int) -> dict:
    """A numeric field with its ``digits`` sibling."""
    if isinstance(x, BigFloat):
        d = min(digits, x.digits)
        return {"value": x.to_str(d), "digits": d}
    return {"value": mp.nstr(x, digits), "digits": digits}


def rat(x) -> str:
    return rational_str(x)


def _cell(v):
    if isinstance(v, dict) and "value" in v:
        return f"{v['closed']} = {v['value']}" if "closed" in v else v["value"]
    if isinstance(v, (list, tuple)):
        return " ".join(str(_cell(x)) for x in v)
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render_text(env: dict) -> str:
    out = io.StringIO()
    params = ", ".join(f"{k}={v}" for k, v in env["parameters"].items())
    prec = env["precision"]
    out.write(f"# {env['command']}  ({params})\n")
    out.write(f"# precision: {prec['digits']} digits ({prec['bits']} bits)"
              + (f", {prec['note']}" if prec.get("note") else "") + "\n")
    results = env["results"]
    for key, value in results.items():
        if key == "rows":
            continue
        out.write(f"{key}: {_cell(value)}\n")
    rows = results.get("rows") or []
    if rows:
        cols = list(rows[0].keys())
        cells = [[_cell(r.get(c)) for c in cols] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        out.write("  ".join(c.rjust(w) for c, w in zip(cols, widths)) + "\n")
        for row in cells:
            out.write("  ".join(v.rjust(w) for v, w in zip(row, widths)) + "\n")
    out.write(f"# provenance: {', '.join(env['provenance'])}\n")
    out.write(f"# wall-clock: {env['wall_clock_seconds']:.3f} s\n")
    return out.getvalue()


def render_csv(env: dict) -> str:
    rows = env["results"].get("rows")
    if not rows:
        raise UsageError(f"{env['command']} has no table; CSV needs one")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    cols = list(rows[0].keys())
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_cell(r.get(c)) for c in cols])
    return out.getvalue()


def render(env: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(env, indent=2) + "\n"
    if fmt == "csv":
        return render_csv(env)
    return render_text(env)


# --------------------------------------------------------------------------
# Commands.  Each returns (parameters, precision record, results, provenance).
# --------------------------------------------------------------------------


def _family(opts):
    name = opts["family"]
    if not name:
        raise UsageError("--family is required")
    try:
        return forms.family(name)
    except forms.UnknownFamily:
        raise UsageError(f"unknown family {name!r}; known: "
                         f"{', '.join(forms.FAMILY_NAMES)}, log<a>, pi") from None


def _prec_record(digits, bits, note=""):
    rec = {"digits": digits, "bits": bits}
    if note:
        rec["note"] = note
    return rec


def cmd_sequence(opts):
    nmax, digits = opts["nmax"], opts["precision"]
    bits = digits_to_bits(digits)
    if nmax is None or nmax < 0:
        raise UsageError("--nmax must be non-negative")
    params = {"family": opts["family"], "nmax": nmax}
    rows = []
    if opts["family"] == "pi":
        for n in range(nmax + 1):
            u, v = forms.pi_form(n).reduce(n)
            with mp.workprec(bits + 32):
                val = mp.mpf(u.numerator) / u.denominator * mp.pi + mp.mpf(v.numerator) / v.denominator
            rows.append({"n": n, "factor": f"2i(1-i)^{n % 4}*d_{n}", "u": rat(u), "v": rat(v),
                         "integral": u.denominator == 1 and v.denominator == 1,
                         "reduced": f"{rat(u)}*pi + {rat(v)}".replace("+ -", "- "),
                         "value": num(BigFloat.from_mpf(val, bits), digits)})
        return params, _prec_record(digits, bits), {"constant": "pi", "rows": rows}, ["exact"]
    spec = _family(opts)
    if spec.name == "catalan":
        bits = max(bits, 256)
        prov = ["hypergeometric series (cross-checked by quadrature in the tests)",
                "pslq snap", "re-verified at doubled precision"]
    else:
        prov = ["recurrence"] if spec.name in ("zeta2", "zeta3") else ["exact"]
    for n in range(nmax + 1):
        f = spec.form(n, bits) if spec.name == "catalan" else spec.form(n)
        delta = spec.delta(n)
        cleared = f.clear(delta) if f.clears(delta) else None
        rows.append({"n": n, "a": rat(f.a), "b": rat(f.b), "scale": f.scale,
                     "delta": str(delta),
                     "delta_a": None if cleared is None else str(cleared[0]),
                     "delta_b": None if cleared is None else str(cleared[1]),
                     "r": num(f.evaluate(bits), digits)})
    results = {"constant": str(spec.xi), "delta_rule": str(spec.delta_rule), "rows": rows}
    return params, _prec_record(digits, bits), results, prov


def cmd_hankel(opts):
    spec = _family(opts)
    nmax, digits = opts["nmax"], opts["precision"]
    if nmax < 1:
        raise UsageError("--nmax must be at least 1")
    if not spec.exact:
        raise UsageError(f"{spec.name} has no exact forms; try `criterion --family {spec.name}`")
    bits = digits_to_bits(digits)
    eps = spec.epsilon(64)
    need = hankel.precision_policy(nmax, eps)
    used = max(bits, need)
    note = f"raised by the Hankel policy to {used} bits" if used > bits else ""
    table = hankel.hankel_table(spec, nmax, used)
    with mp.workprec(64):
        ref = mp.log(eps / 4)
    rows = [{"n": r.n, "R": num(r.numeric, digits),
             "log_R_over_n2": num(mp.mpf(r.normalized), 6),
             "exact": str(r.exact), "delta_product": str(r.cleared_factor),
             "cleared": None if r.cleared is None else [str(c) for c in r.cleared]}
            for r in table]
    results = {"epsilon": spec.epsilon_closed, "reference_log_eps_over_4": num(ref, 10),
               "rows": rows}
    prov = ["exact (fraction-free elimination over Q[xi])",
            "recurrence" if spec.name in ("zeta2", "zeta3") else "exact forms"]
    return {"family": spec.name, "nmax": nmax}, _prec_record(digits, used, note), results, prov


def _verdict_results(v, digits):
    return {
        "epsilon": {"closed": v.epsilon_closed, **num(v.epsilon, digits)},
        "Delta": {"closed": v.Delta_closed, **num(v.Delta, digits)},
        "prop1_quantity": num(v.prop1_quantity, digits),
        "prop1": v.prop1.value.upper(),
        "prop1_line": f"{criteria.truncate4(v.prop1_quantity)} {'<' if v.prop1_quantity < 1 else '>'} 1 "
                      f"{v.prop1.value.upper()}",
        "prop2_quantity": num(v.prop2_quantity, digits),
        "prop2": v.prop2.value.upper(),
        "prop2_line": f"{criteria.truncate4(v.prop2_quantity)} {'<' if v.prop2_quantity < 1 else '>'} 1 "
                      f"{v.prop2.value.upper()}",
        "z_nonconstant_sampled": v.z_nonconstant,
    }


def cmd_criterion(opts):
    spec = _family(opts)
    digits, nmax = opts["precision"], opts["nmax"]
    bits = digits_to_bits(digits)
    if spec.name == "catalan":
        cv = criteria.catalan_verdict(nmax, max(bits, 192), bits)
        results = _verdict_results(cv.verdict, digits)
        results["densified_reference"] = num(cv.reference, 10)
        results["densified_stopped_at"] = cv.stopped_at
        results["rows"] = [{"n": n, "R_densified": num(R, min(digits, 20)),
                            "R_densified_root": num(r, 10)} for n, R, r in cv.table]
        prov = ["hypergeometric series (densified integrals)", "numeric elimination"]
        return {"family": "catalan", "nmax": nmax}, _prec_record(digits, max(bits, 192)), results, prov
    v = criteria.family_verdict(spec, nmax, None, bits)
    results = _verdict_results(v, digits)
    results["decay_tail_decreasing"] = v.tail_decreasing() if v.decay_table else None
    rows = []
    for (n, cert), (_, factor, coeffs) in zip(v.decay_table, v.integrality):
        rows.append({"n": n, "delta_product_times_R": num(cert, min(digits, 20)),
                     "delta_product": str(factor),
                     "integer_coefficients": None if coeffs is None else [str(c) for c in coeffs]})
    results["rows"] = rows
    prov = ["exact (closed-form eps, analytic Delta)",
            "recurrence" if spec.name in ("zeta2", "zeta3") else "exact forms"]
    note = "decay table at the Hankel precision policy"
    return {"family": spec.name, "nmax": nmax}, _prec_record(digits, bits, note), results, prov


def cmd_fekete(opts):
    digits, nmax = opts["precision"], opts["nmax"]
    if nmax < 2:
        raise UsageError("--nmax must be at least 2")
    eps = _rational(opts["eps"], "eps")
    if eps <= 0:
        raise UsageError("--eps must be positive")
    bits = digits_to_bits(digits)
    rows = []
    for n in range(2, nmax + 1):
        c = fekete.max_vandermonde(n, eps, bits)
        rows.append({"n": n, "delta": num(c.normalized, min(digits, 20)),
                     "value": num(c.value, min(digits, 20)), "sweeps": c.sweeps})
    with mp.workprec(bits):
        ref = fekete.reference_limit(eps)
    results = {"eps": rat(eps), "limit_eps_over_4": num(ref, 10), "rows": rows}
    prov = ["coordinate ascent + Newton polish on [0,1], rescaled by eps^(n(n-1))"]
    return {"eps": rat(eps), "nmax": nmax}, _prec_record(digits, bits), results, prov


# verify suites -------------------------------------------------------------


def _verify_heine(opts, bits, digits):
    name = opts["family"] or "log2"
    n = opts["n"] or 2
    spec = _family({"family": name})
    r = hankel.heine_verify(spec, n, bits)
    row = {"family": spec.name, "n": n, "determinant": num(r.determinant, digits),
           "integral": num(r.integral, digits), "agree_digits": round(r.agree_digits, 1),
           "ok": r.agree}
    return [row], ["exact", "quadrature"], {"family": spec.name, "n": n}


def _verify_vandermonde(opts, bits, digits):
    n, trials = opts["n"] or 6, opts["trials"]
    rng = random.Random(opts["seed"])
    rows = []
    for m in range(2, n + 1):
        ok = sum(hankel.vandermonde_det(z) == hankel.vandermonde_matrix_det(z)
                 for z in (hankel.random_rationals(rng, m) for _ in range(trials)))
        rows.append({"n": m, "trials": trials, "passed": ok, "ok": ok == trials})
    return rows, ["exact"], {"n": n, "trials": trials, "seed": opts["seed"]}


def _verify_scaling(opts, bits, digits):
    n, trials = opts["n"] or 6, opts["trials"]
    rng = random.Random(opts["seed"])
    rows = []
    for m in range(1, n + 1):
        ok = 0
        for _ in range(trials):
            vals = hankel.random_rationals(rng, 2 * m - 1)
            c = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 9))
            ok += hankel.scaling_check(vals, c, m)
        rows.append({"n": m, "trials": trials, "passed": ok, "ok": ok == trials})
    return rows, ["exact"], {"n": n, "trials": trials, "seed": opts["seed"]}


def _verify_kronecker(opts, bits, digits):
    N = opts["n"] or 6
    cases = [("1/2^k", [Fraction(1, 2 ** k) for k in range(2 * N - 1)], 2),
             ("k+1", [Fraction(k + 1) for k in range(2 * N - 1)], 3)]
    rows = []
    for label, vals, expected in cases:
        scan = hankel.kronecker_scan(vals, N)
        rows.append({"sequence": label, "dets": [rat(d) for d in scan.dets],
                     "first_vanishing": scan.first_vanishing, "expected": expected,
                     "ok": scan.first_vanishing == expected})
    return rows, ["exact"], {"n": N}


def _verify_stutter(opts, bits, digits):
    k, ncoef = opts["k"], opts["n"] or 50
    if k < 2:
        raise UsageError("--k must be at least 2")
    base = -(-ncoef // k)
    spec = forms.family(opts["family"] or "log2")
    seqs = [(spec.name, [spec.form(j) for j in range(base)]),
            ("1/(j+1)", [Fraction(1, j + 1) for j in range(base)])]
    rows = [{"sequence": label, "k": k, "coefficients": ncoef,
             "ok": hankel.stutter_genfn_check(seq, k, ncoef)} for label, seq in seqs]
    return rows, ["exact"], {"k": k, "n": ncoef, "family": spec.name}


def _verify_zetaq(opts, bits, digits):
    q = _rational(opts["q"], "q")
    if not 0 < abs(q) < 1:
        raise UsageError("--q must satisfy 0 < |q| < 1")
    vals = [forms.zeta_q3(q, bits, form) for form in (1, 2, 3)]
    with mp.workprec(bits):
        spread = max(abs(a.value - b.value) for a in vals for b in vals)
        agree = float(-mp.log10(spread / abs(vals[0].value))) if spread else float(digits)
    ok = agree >= digits - 2
    rows = [{"form": i + 1, "value": num(v, digits), "agree_digits": round(min(agree, digits), 1),
             "ok": ok} for i, v in enumerate(vals)]
    return rows, ["series (three forms)"], {"q": rat(q)}


VERIFY = {"heine": _verify_heine, "vandermonde": _verify_vandermonde,
          "kronecker": _verify_kronecker, "stutter": _verify_stutter,
          "scaling": _verify_scaling, "zetaq": _verify_zetaq}


def cmd_verify(opts):
    which = opts["which"]
    if which not in VERIFY:
        raise UsageError(f"--which must be one of {', '.join(VERIFY_CHOICES)}")
    digits = opts["precision"]
    bits = digits_to_bits(digits)
    rows, prov, extra = VERIFY[which](opts, bits, digits)
    ok = all(r["ok"] for r in rows)
    results = {"which": which, "status": "PASS" if ok else "FAIL", **extra, "rows": rows}
    return {"which": which, **extra}, _prec_record(digits, bits), results, prov


COMMANDS = {"sequence": cmd_sequence, "hankel": cmd_hankel, "criterion": cmd_criterion,
            "fekete": cmd_fekete, "verify": cmd_verify}


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision", type=str, help="decimal digits (default 50)")
    common.add_argument("--format", choices=("text", "json", "csv"))
    common.add_argument("--config", help="key=value file with defaults")
    common.add_argument("--nmax", type=str)
    common.add_argument("--family")
    parser = _Parser(prog="irratio", description="Hankel-determinant irrationality laboratory.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("sequence", parents=[common], help="linear forms r_n and their integer witnesses")
    sub.add_parser("hankel", parents=[common], help="exact Hankel determinants R_n")
    sub.add_parser("criterion", parents=[common], help="both criteria with certificates")
    p = sub.add_parser("fekete", parents=[common], help="normalized Fekete maxima on [0, eps]")
    p.add_argument("--eps")
    p = sub.add_parser("verify", parents=[common], help="run one identity suite")
    p.add_argument("--which", choices=VERIFY_CHOICES)
    p.add_argument("--k", type=str)
    p.add_argument("--q")
    p.add_argument("--n", type=str)
    p.add_argument("--trials", type=str)
    p.add_argument("--seed", type=str)
    return parser


def run(argv: Optional[list] = None, env=None) -> tuple[int, str]:
    """Run the CLI; returns ``(exit code, output text)``."""
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        opts = resolve(args, env)
        started = time.perf_counter()
        params, prec, results, prov = COMMANDS[args.command](opts)
        env_out = {
            "command": args.command,
            "parameters": params,
            "precision": prec,
            "results": results,
            "provenance": prov,
            "wall_clock_seconds": round(time.perf_counter() - started, 3),
        }
        text = render(env_out, opts["format"])
    except UsageError as exc:
        return EXIT_USAGE, f"irratio: error: {exc}\n"
    except (hankel.PrecisionExhausted, NonConvergence) as exc:
        return EXIT_PRECISION, f"irratio: precision exhausted: {exc}\n"
    except forms.SnapFailure as exc:
        return EXIT_PRECISION, f"irratio: snapping failed: {exc}\n"
    if args.command == "verify" and results["status"] != "PASS":
        return EXIT_IDENTITY, text
    return EXIT_OK, text


def main(argv: Optional[list] = None) -> int:
    code, text = run(argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_IDENTITY) else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
