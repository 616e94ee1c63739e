"""Snap the Catalan forms to u*G + v and print the densified Hankel roots."""

import argparse

import mpmath as mp

from irratio.criteria import catalan_verdict
from irratio.forms import catalan_snap_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nsnap", type=int, default=4)
    ap.add_argument("--nmax", type=int, default=8)
    args = ap.parse_args()
    print(f"{'n':>3} {'u':>22} {'v':>22} {'residual':>10} {'re-check':>10}")
    for n in range(args.nsnap + 1):
        r = catalan_snap_report(n)
        print(f"{n:>3} {r.u:>22} {r.v:>22} {mp.nstr(r.residual, 3):>10} "
              f"{mp.nstr(r.verify_residual, 3):>10}")
    cv = catalan_verdict(args.nmax)
    v = cv.verdict
    print(f"# eps*Delta = {mp.nstr(v.prop1_quantity, 6)} {v.prop1.value}, "
          f"eps*Delta^(3/2)/4 = {mp.nstr(v.prop2_quantity, 6)} {v.prop2.value}")
    print(f"# densified reference (eps/4)^(1/5) = {mp.nstr(cv.reference, 6)}")
    for n, _, root in cv.table:
        print(f"{n:>3} {mp.nstr(root, 8):>12}")
    if cv.stopped_at:
        print(f"# stopped at n={cv.stopped_at}: guard bits exhausted")


if __name__ == "__main__":
    main()
