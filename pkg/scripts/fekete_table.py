"""Print normalized Fekete maxima delta_n on [0, eps] with the Legendre cross-check."""

import argparse
from fractions import Fraction

import mpmath as mp

from irratio.fekete import legendre_fekete, max_vandermonde, reference_limit, vandermonde_square


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=24)
    ap.add_argument("--eps", type=Fraction, default=Fraction(1))
    ap.add_argument("--bits", type=int, default=96)
    args = ap.parse_args()
    print(f"# limit eps/4 = {mp.nstr(reference_limit(args.eps), 10)}")
    print(f"{'n':>3} {'delta_n':>14} {'legendre':>14} {'sweeps':>7}")
    for n in range(2, args.nmax + 1):
        cfg = max_vandermonde(n, args.eps, args.bits)
        with mp.workprec(args.bits):
            ref = mp.root(vandermonde_square(legendre_fekete(n, args.bits)), n * (n - 1))
            ref *= mp.mpf(args.eps.numerator) / args.eps.denominator
        print(f"{n:>3} {mp.nstr(cfg.normalized.value, 10):>14} {mp.nstr(ref, 10):>14} "
              f"{cfg.sweeps:>7}")


if __name__ == "__main__":
    main()
