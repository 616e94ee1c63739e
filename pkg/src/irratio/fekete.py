"""Fekete points on an interval and the normalized maxima delta_n.

The maximizer of ``prod_{j<l} (z_j - z_l)^2`` over ``[0, eps]^n`` is found on
[0, 1] and rescaled: points scale by ``eps`` and the value by
``eps^(n(n-1))``.  Endpoints are pinned at 0 and 1; the interior points are
optimized by cyclic coordinate ascent (each coordinate maximized exactly)
followed by a full Newton polish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .exactnum import BigFloat
from .quad import NonConvergence

SWEEP_CAP = 10_000
NEWTON_CAP = 200
# sweeps stop here and hand over to the Newton polish
SWEEP_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FeketeConfig:
    n: int
    eps: object
    points: tuple          # BigFloat, strictly increasing, 0 and eps included
    value: BigFloat        # prod_{j<l} (z_j - z_l)^2
    normalized: BigFloat   # value^(1/(n(n-1)))
    sweeps: int
    gradient_norm: float

    def as_dict(self, digits: int = 20) -> dict:
        return {
            "n": self.n,
            "points": [p.to_str(digits) for p in self.points],
            "value": self.value.to_str(digits),
            "normalized": self.normalized.to_str(digits),
            "sweeps": self.sweeps,
            "gradient_norm": self.gradient_norm,
        }


def chebyshev_start(n: int) -> list:
    """Chebyshev extrema ``(1 - cos(k pi / (n-1))) / 2`` on [0, 1]."""
    return [(1 - mp.cos(mp.pi * k / (n - 1))) / 2 for k in range(n)]


def _gradient(z, i):
    # d/dz_i of (1/2) log V
    return mp.fsum(1 / (z[i] - z[j]) for j in range(len(z)) if j != i)


def _coordinate_max(z, i, tol):
    """Maximize over ``z_i`` between its neighbours.

    ``sum_j log|z_i - z_j|`` is strictly concave on the gap, so the maximizer
    is the unique root of the gradient there; Newton with a bisection guard.
    """
    lo, hi = z[i - 1], z[i + 1]
    x = z[i]
    for _ in range(200):
        g = mp.fsum(1 / (x - z[j]) for j in range(len(z)) if j != i)
        if g > 0:
            lo = x
        else:
            hi = x
        h = -mp.fsum(1 / (x - z[j]) ** 2 for j in range(len(z)) if j != i)
        step = -g / h
        nxt = x + step
        if not lo < nxt < hi:
            nxt = (lo + hi) / 2
        if abs(nxt - x) <= tol:
            return nxt
        x = nxt
    return x


def _newton_polish(z, tol):
    """Full Newton on the interior gradient of ``(1/2) log V``."""
    n = len(z)
    m = n - 2
    for _ in range(NEWTON_CAP):
        g = mp.matrix([_gradient(z, i) for i in range(1, n - 1)])
        if mp.norm(g, mp.inf) < tol:
            return z
        H = mp.matrix(m, m)
        for a in range(m):
            i = a + 1
            H[a, a] = -mp.fsum(1 / (z[i] - z[j]) ** 2 for j in range(n) if j != i)
            for b in range(m):
                if b != a:
                    H[a, b] = 1 / (z[i] - z[b + 1]) ** 2
        step = mp.lu_solve(H, -g)
        t = mp.mpf(1)
        while True:
            cand = [z[0]] + [z[a + 1] + t * step[a] for a in range(m)] + [z[-1]]
            if all(cand[k] < cand[k + 1] for k in range(n - 1)):
                break
            t /= 2
        z = cand
    raise NonConvergence(f"Fekete Newton polish did not converge for n={n}")


def _unit_maximizer(n: int, precision: int):
    digits = precision * math.log10(2)
    target = mp.mpf(10) ** (-(digits / 2))
    z = chebyshev_start(n)
    if n == 2:
        return z, 0, mp.mpf(0)
    sweeps = 0
    while True:
        worst = max(abs(_gradient(z, i)) for i in range(1, n - 1))
        if worst < SWEEP_TOLERANCE or worst < target:
            break
        if sweeps >= SWEEP_CAP:
            raise NonConvergence(f"coordinate ascent hit {SWEEP_CAP} sweeps for n={n}")
        for i in range(1, n - 1):
            z[i] = _coordinate_max(z, i, mp.ldexp(1, -precision))
        sweeps += 1
    z = _newton_polish(z, target)
    gnorm = max(abs(_gradient(z, i)) for i in range(1, n - 1))
    return z, sweeps, gnorm


def _eps_mpf(eps):
    if isinstance(eps, Fraction):
        return mp.mpf(eps.numerator) / eps.denominator
    return mp.mpf(eps)


def vandermonde_square(z) -> mp.mpf:
    return mp.fprod((z[l] - z[j]) ** 2 for j in range(len(z)) for l in range(j + 1, len(z)))


def max_vandermonde(n: int, eps=1, precision: int = 128) -> FeketeConfig:
    """Maximize ``prod_{j<l} (z_j - z_l)^2`` over ``[0, eps]^n``.

    Parameters
    ----------
    n : int
        Number of points, at least 2.
    eps : int, Fraction or mpf
        Right end of the interval.
    precision : int
        Working precision in bits; the interior gradient is driven below
        ``10^(-digits/2)``.

    Raises
    ------
    NonConvergence
        If the sweep or Newton caps are reached.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    with mp.workprec(precision + 32):
        e = _eps_mpf(eps)
        if not e > 0:
            raise ValueError("eps must be positive")
        z, sweeps, gnorm = _unit_maximizer(n, precision + 32)
        unit_value = vandermonde_square(z)
        value = unit_value * e ** (n * (n - 1))
        normalized = mp.root(value, n * (n - 1))
        # the value is stationary at the optimum: the position error enters squared
        rel = mp.ldexp(1, -precision) + (gnorm * n) ** 2
        pts = tuple(BigFloat(+(p * e), precision, abs(p * e) * rel) for p in z)
    with mp.workprec(precision):
        return FeketeConfig(
            n, eps, pts,
            BigFloat(+value, precision, abs(value) * rel),
            BigFloat(+normalized, precision, abs(normalized) * rel),
            sweeps, float(gnorm))


def diameter_table(nmax: int, eps=1, precision: int = 128) -> list[tuple[int, BigFloat]]:
    """Rows ``(n, delta_n)`` for ``n = 2..nmax``; delta_n decreases to ``eps/4``."""
    if nmax < 2:
        raise ValueError("nmax must be at least 2")
    return [(n, max_vandermonde(n, eps, precision).normalized) for n in range(2, nmax + 1)]


def legendre_fekete(n: int, precision: int = 128) -> list:
    """Independent reference on [0, 1]: the endpoints plus the zeros of
    ``P'_(n-1)`` mapped from [-1, 1]."""
    with mp.workprec(precision):
        if n == 2:
            return [mp.mpf(0), mp.mpf(1)]
        coeffs = _legendre_derivative_coeffs(n - 1)
        roots = sorted(mp.re(r) for r in mp.polyroots(coeffs[::-1], maxsteps=200, extraprec=precision))
        return [mp.mpf(0)] + [(r + 1) / 2 for r in roots] + [mp.mpf(1)]


def _legendre_derivative_coeffs(m: int) -> list:
    """Ascending coefficients of ``P'_m`` via Bonnet's recurrence, exactly."""
    p_prev, p = [Fraction(1)], [Fraction(0), Fraction(1)]
    if m == 0:
        p = p_prev
    for k in range(1, m):
        nxt = [Fraction(0)] * (k + 2)
        for i, c in enumerate(p):
            nxt[i + 1] += Fraction(2 * k + 1, k + 1) * c
        for i, c in enumerate(p_prev):
            nxt[i] -= Fraction(k, k + 1) * c
        p_prev, p = p, nxt
    d = [i * c for i, c in enumerate(p)][1:]
    return [mp.mpf(c.numerator) / c.denominator for c in d]


def reference_limit(eps=1) -> mp.mpf:
    """The transfinite diameter ``eps/4`` of ``[0, eps]``."""
    return _eps_mpf(eps) / 4
