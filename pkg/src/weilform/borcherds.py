"""Borcherds products q^rho prod (1 - q^n)^{s(n^2) c(n^2)} for the level-4M lattice data."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .arith import divisors
from .discriminant import DiscriminantForm
from .errors import InsufficientOrderError, IntegralityError
from .qseries import FracQSeries, eta_quotient, extract_exponents, product_expand
from .scalar_forms import eisenstein_G_epsilon


@dataclass(frozen=True)
class EtaMatch:
    """kind is 'exact', 'cofactor' or 'none'; cofactor = lift / prod eta(d tau)^{r_d}."""

    kind: str
    exponents: dict[int, int]
    cofactor: FracQSeries | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "exponents": {str(d): r for d, r in sorted(self.exponents.items())},
            "cofactor": None if self.cofactor is None else self.cofactor.to_json(),
        }


@dataclass(frozen=True, eq=False)
class BorcherdsLift:
    principal_part: dict[int, Fraction]
    weight: Fraction
    weyl_rho: Fraction
    exponents: dict[int, int]
    expansion: FracQSeries
    divisors: dict[int, int]
    eta_match: EtaMatch | None = None

    def to_json(self) -> dict:
        return {
            "principal_part": {str(n): str(c) for n, c in sorted(self.principal_part.items())},
            "weight": str(self.weight),
            "rho": str(self.weyl_rho),
            "exponents": {str(n): e for n, e in sorted(self.exponents.items())},
            "expansion": self.expansion.to_json(),
            "divisors": {str(d): v for d, v in sorted(self.divisors.items())},
            "eta_match": None if self.eta_match is None else self.eta_match.to_json(),
        }


def _require_lattice_form(D: DiscriminantForm) -> None:
    if D != DiscriminantForm.from_level(D.level):
        raise ValueError(f"{D.symbol()} is not the level-{D.level} lattice form with all eps_p = +1")


def _as_int(x: Fraction, n: int) -> int:
    if Fraction(x).denominator != 1:
        raise IntegralityError(n, x)
    return int(x)


def weyl_vector(D: DiscriminantForm, principal: Mapping[int, Fraction], hstar: FracQSeries) -> Fraction:
    """rho = -sum_{n >= 0} s(n) c(-n) H*(n) over the principal part (n <= 0 keys of ``principal``)."""
    rho = Fraction(0)
    for m, c in principal.items():
        if m > 0 or not c:
            continue
        n = -m
        if hstar.trunc is not None and n >= hstar.precision:
            raise InsufficientOrderError(f"H*({n}) lies beyond the computed range")
        rho -= D.s_of(n) * c * hstar.coefficient(n)
    return rho


def cm_divisor_orders(D: DiscriminantForm, f: FracQSeries, discriminants: Sequence[int]) -> dict[int, int]:
    """Order sum_{n >= 1} s(Delta n^2) c(Delta n^2) of the lift at CM points of discriminant Delta."""
    low = f.valuation()
    out = {}
    for disc in discriminants:
        if disc >= 0:
            raise ValueError("CM discriminants are negative")
        total = Fraction(0)
        n = 1
        while low is not None and disc * n * n >= low:
            total += D.s_of(disc * n * n) * f.coefficient(disc * n * n)
            n += 1
        out[disc] = _as_int(total, disc)
    return out


def lift(
    D: DiscriminantForm,
    f: FracQSeries,
    order: int,
    hstar: FracQSeries | None = None,
    discriminants: Sequence[int] | None = None,
    eta_pool: Sequence[int] | None = None,
) -> BorcherdsLift:
    """Psi(f) expanded to O(q^(rho + order))."""
    _require_lattice_form(D)
    if f.is_zero():
        principal: dict[int, Fraction] = {}
    else:
        principal = {int(e): c for e, c in f.items() if e <= 0}
    for n, c in principal.items():
        _as_int(D.s_of(n) * c, n)
    need = (order - 1) ** 2
    if f.trunc is None or f.trunc <= need:
        raise InsufficientOrderError(f"lift to order {order} needs c(n^2) through q^{need}; series known to {f.precision}")
    for e, _ in f.items():
        if not D.represents_norm(int(e)):
            raise ValueError(f"input violates the eps-condition at q^{e}")
    exponents = {n: _as_int(D.s_of(n * n) * f.coefficient(n * n), n * n) for n in range(1, order)}
    poles = [-n for n in principal if n < 0]
    if hstar is None:
        hstar = eisenstein_G_epsilon(D, max(poles, default=0) + 2)
    rho = weyl_vector(D, principal, hstar)
    expansion = product_expand(exponents, rho, order)
    weight = D.s_of(0) * principal.get(0, Fraction(0))
    if discriminants is None:
        low = min(principal, default=0)
        discriminants = [d for d in range(-1, low - 1, -1) if d % 4 in (0, 1)]
    divs = cm_divisor_orders(D, f, discriminants)
    pool = list(eta_pool) if eta_pool is not None else divisors(6 * (D.level // 4))
    result = BorcherdsLift(principal, weight, rho, exponents, expansion, divs)
    match = eta_quotient_match(result, pool, level=D.level // 4)
    return BorcherdsLift(principal, weight, rho, exponents, expansion, divs, match)


def eta_quotient_match(
    lift_or_series: BorcherdsLift | FracQSeries, divisor_pool: Sequence[int], level: int | None = None
) -> EtaMatch:
    """Identify a lift as prod eta(d tau)^{r_d}, or divide out the closest eta quotient.

    Among eta quotients of minimal total exponent, those supported on divisors
    of ``level`` are preferred, then those with smaller divisors.
    """
    if isinstance(lift_or_series, BorcherdsLift):
        expansion = lift_or_series.expansion
    else:
        expansion = lift_or_series
    pool = divisor_pool
    weyl, e = extract_exponents(expansion)
    pool = sorted(set(pool))
    order = len(e) + 1
    r: dict[int, Fraction] = {}
    for d in pool:
        if d >= order:
            break
        r[d] = e[d] - sum((r[c] for c in r if d % c == 0), Fraction(0))
    exact = all(x.denominator == 1 for x in r.values())
    if exact:
        for n, value in e.items():
            if sum((x for d, x in r.items() if n % d == 0), Fraction(0)) != value:
                exact = False
                break
    if exact and sum(d * x for d, x in r.items()) == 24 * weyl:
        return EtaMatch("exact", {d: int(x) for d, x in r.items() if x})
    target = 24 * weyl
    if target.denominator != 1:
        return EtaMatch("none", {})
    best = _smallest_eta_solution(int(target), pool, level)
    if best is None:
        return EtaMatch("none", {})
    quotient = eta_quotient({d: -x for d, x in best.items()}, order)
    cofactor = expansion * quotient
    if cofactor.valuation() not in (None, 0) or cofactor.denom != 1:
        return EtaMatch("none", best)
    return EtaMatch("cofactor", best, cofactor)


def _smallest_eta_solution(
    target: int, pool: Sequence[int], level: int | None = None, max_size: int = 24
) -> dict[int, int] | None:
    """Integer r_d with sum d r_d = target and minimal sum |r_d|."""
    coins = [(d, s) for d in pool for s in (1, -1)]
    for size in range(0, max_size + 1):
        found = []
        for combo in itertools.combinations_with_replacement(coins, size):
            if sum(d * s for d, s in combo) != target:
                continue
            r: dict[int, int] = {}
            for d, s in combo:
                r[d] = r.get(d, 0) + s
            if sum(abs(x) for x in r.values()) == size:
                found.append(r)
        if found:

            def rank(r):
                support = [d for d, x in r.items() if x]
                outside = sum(1 for d in support if level and level % d)
                return (outside, max(support, default=0), sorted(r.items()))

            return min(found, key=rank)
    return None
