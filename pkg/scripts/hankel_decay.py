"""Print log R_n / n^2 next to log(eps/4), plus a Richardson estimate of the limit."""

import argparse

import mpmath as mp

from irratio.forms import family
from irratio.hankel import hankel_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="log3")
    ap.add_argument("--nmax", type=int, default=12)
    args = ap.parse_args()
    spec = family(args.family)
    eps = spec.epsilon(64)
    target = mp.log(eps / 4)
    print(f"# {spec.name}: log(eps/4) = {mp.nstr(target, 8)}")
    print(f"{'n':>3} {'log R_n/n^2':>14} {'gap':>10} {'n*gap':>8} {'richardson':>12}")
    prev = None
    for row in hankel_table(spec, args.nmax, with_numeric=False):
        e = mp.mpf(row.normalized)
        rich = "" if prev is None else mp.nstr(row.n * e - (row.n - 1) * prev, 6)
        print(f"{row.n:>3} {mp.nstr(e, 8):>14} {mp.nstr(e - target, 4):>10} "
              f"{mp.nstr(row.n * (e - target), 4):>8} {rich:>12}")
        prev = e


if __name__ == "__main__":
    main()
