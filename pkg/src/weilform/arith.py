"""Small number-theoretic helpers: Kronecker symbol, factorisation shortcuts."""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

from sympy import divisors as _sympy_divisors
from sympy import factorint as _sympy_factorint


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers a and n.

    Conventions: (a/-1) = -1 for a < 0, (a/2) = (2/a) for odd a and 0 for even a.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol for an odd prime p (0 when p divides a)."""
    return kronecker(a, p)


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of |n| as sorted (p, e) pairs."""
    n = abs(n)
    if n <= 1:
        return ()
    return tuple(sorted(_sympy_factorint(n).items()))


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def is_prime(n: int) -> bool:
    f = factorize(n)
    return n > 1 and len(f) == 1 and f[0][1] == 1


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, f) with q = p^f, or None if q is not a prime power > 1."""
    f = factorize(q)
    if q > 1 and len(f) == 1:
        return f[0]
    return None


def divisors(n: int) -> list[int]:
    return list(_sympy_divisors(abs(n)))


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def fundamental_part(disc: int) -> tuple[int, int]:
    """Write a discriminant disc = d0 * f^2 with d0 fundamental; return (d0, f)."""
    if disc % 4 not in (0, 1) or disc == 0:
        raise ValueError(f"{disc} is not a nonzero discriminant")
    sign = -1 if disc < 0 else 1
    core, f = sign, 1
    for p, e in factorize(disc):
        core *= p ** (e % 2)
        f *= p ** (e // 2)
    if core % 4 != 1:
        core *= 4
        f //= 2
    return core, f


def divisor_sigma_table(power: int, n_max: int) -> list[int]:
    """sigma_power(n) for 0 <= n < n_max (entry 0 is 0)."""
    table = [0] * max(n_max, 1)
    for d in range(1, n_max):
        dp = d**power
        for m in range(d, n_max, d):
            table[m] += dp
    return table


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
