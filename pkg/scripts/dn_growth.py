"""Print d_n^(1/n) for d_n = lcm(1..n), which tends to e."""

import argparse

import mpmath as mp

from irratio.exactnum import dn_growth_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=2000)
    ap.add_argument("--every", type=int, default=100)
    args = ap.parse_args()
    for n, g in dn_growth_table(args.nmax, 64):
        if n % args.every == 0:
            v = g.value
            print(f"{n:>6} {mp.nstr(v, 8):>12} {mp.nstr(v - mp.e, 3):>10}")


if __name__ == "__main__":
    main()
