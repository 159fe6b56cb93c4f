"""Registry of supported levels: cusps of Gamma_0(N) and Hauptmodul eta quotients.

Both supported levels have genus zero, so every weight-0 function holomorphic
on the upper half-plane is a polynomial in eta-quotient Hauptmoduln with poles
at single cusps.  The eta quotients are found by solving Ligozat's order
formulas, not hard-coded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, prod

from sympy import Matrix, Rational

from .arith import divisors, prime_divisors
from .errors import UnsupportedLevelError

SUPPORTED_LEVELS = (4, 12)

# theta(tau) = eta(2 tau)^5 / (eta(tau)^2 eta(4 tau)^2)
THETA_ETA = {1: -2, 2: 5, 4: -2}


def cusp_width(N: int, d: int) -> int:
    return N // gcd(d * d, N)


def ligozat_order(N: int, r: dict[int, int], d: int) -> Fraction:
    """Order of prod eta(delta tau)^r_delta at the cusp 1/d of Gamma_0(N), in the local parameter."""
    total = Fraction(0)
    for delta, x in r.items():
        total += Fraction(gcd(d, delta) ** 2 * x, gcd(d, N // d) * d * delta)
    return Fraction(N, 24) * total


def index_gamma0(N: int) -> int:
    return int(N * prod(Fraction(p + 1, p) for p in prime_divisors(N)))


@dataclass(frozen=True)
class LevelData:
    N: int
    cusps: tuple[int, ...]  # cusp 1/d for each d | N; d = N is infinity
    hauptmoduln: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]

    @property
    def index(self) -> int:
        return index_gamma0(self.N)

    def width(self, d: int) -> int:
        return cusp_width(self.N, d)

    def hauptmodul(self, d: int) -> dict[int, int]:
        return dict(dict(self.hauptmoduln)[d])

    def theta_order(self, d: int) -> Fraction:
        return ligozat_order(self.N, THETA_ETA, d)


def _is_rational_square(r: dict[int, int]) -> bool:
    num = prod(delta**x for delta, x in r.items() if x > 0)
    den = prod(delta ** (-x) for delta, x in r.items() if x < 0)
    return isqrt(num * den) ** 2 == num * den


def _solve_hauptmodul(N: int, pole: int, zero: int) -> dict[int, int] | None:
    cusps = divisors(N)
    deltas = divisors(N)
    A = Matrix([[Rational(ligozat_order(N, {delta: 1}, d)) for delta in deltas] for d in cusps])
    target = Matrix([(-1 if d == pole else 1 if d == zero else 0) for d in cusps])
    try:
        sol = A.LUsolve(target)
    except ValueError:
        return None
    if any(x.q != 1 for x in sol):
        return None
    r = {delta: int(x) for delta, x in zip(deltas, sol)}
    if sum(r.values()) != 0 or sum(delta * x for delta, x in r.items()) % 24:
        return None
    if sum((N // delta) * x for delta, x in r.items()) % 24 or not _is_rational_square(r):
        return None
    return r


@lru_cache(maxsize=None)
def level_data(N: int) -> LevelData:
    if N not in SUPPORTED_LEVELS:
        raise UnsupportedLevelError(
            f"unsupported level {N}: supported levels are {', '.join(map(str, SUPPORTED_LEVELS))}"
        )
    cusps = tuple(divisors(N))
    if any(gcd(d, N // d) > 2 for d in cusps):
        raise UnsupportedLevelError(f"level {N} has several cusps over one divisor")
    found = []
    for d in cusps:
        # Prefer a zero at infinity so that the expansion starts at q^1.
        others = [N] + [c for c in cusps if c not in (d, N)] if d != N else [c for c in cusps if c != N]
        for zero in others:
            r = _solve_hauptmodul(N, d, zero)
            if r is not None:
                found.append((d, tuple(sorted(r.items()))))
                break
        else:
            raise UnsupportedLevelError(f"no eta-quotient Hauptmodul at cusp 1/{d} of level {N}")
    return LevelData(N, cusps, tuple(found))
