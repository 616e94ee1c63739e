"""Tabulate the empirical factor structure of k-stuttering Vandermonde determinants."""

import argparse
import json

from irratio.hankel import stutter_structure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=8)
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = [stutter_structure(n, k) for k in range(2, args.kmax + 1)
            for n in range(2, args.nmax + 1)]
    if args.json:
        print(json.dumps([r.as_dict() for r in rows], indent=2))
        return
    print(f"{'k':>2} {'n':>3} {'monomial':<26} {'at z=1':<16} {'pairs':>5} {'quotient':>9}")
    for r in rows:
        if r.identically_zero:
            print(f"{r.k:>2} {r.n:>3} identically zero")
            continue
        q = "-" if r.constant_quotient is None else str(r.constant_quotient)
        print(f"{r.k:>2} {r.n:>3} {str(list(r.monomial)):<26} {str(list(r.at_one)):<16} "
              f"{len(r.pairs):>5} {q:>9}")


if __name__ == "__main__":
    main()
