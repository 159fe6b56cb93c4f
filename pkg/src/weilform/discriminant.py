"""Jordan-component calculus for finite quadratic modules (discriminant forms).

Components follow the Conway-Sloane genus-symbol conventions: an odd-p component
p^{+-n} has exponent q = p^f and rank n; a 2-adic component is either odd
(q_t^{+-n}, oddity t mod 8) or even (q^{+-n}).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, prod

import numpy as np

from .arith import is_squarefree, kronecker, prime_divisors, prime_power, valuation


@dataclass(frozen=True, order=True)
class JordanComponent:
    """One Jordan component q^{sign*rank} (with oddity t when 2-adic odd)."""

    p: int
    q: int
    rank: int
    sign: int
    oddity_t: int = 0
    odd: bool = False

    def __post_init__(self):
        pp = prime_power(self.q)
        if pp is None or pp[0] != self.p:
            raise ValueError(f"{self.q} is not a power of the prime {self.p}")
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "oddity_t", self.oddity_t % 8)
        if self.p != 2:
            if self.odd or self.oddity_t:
                raise ValueError("odd-p components carry no oddity")
            return
        if self.oddity_t and not self.odd:
            object.__setattr__(self, "odd", True)
        if self.odd:
            if (self.oddity_t - self.rank) % 2:
                raise ValueError("oddity must have the parity of the rank")
            if _odd_decomposition(self.rank, self.oddity_t, self.sign) is None:
                raise ValueError(f"no odd 2-adic component {self.q}_{self.oddity_t}^{self.sign * self.rank}")
        elif self.rank % 2:
            raise ValueError("even 2-adic components have even rank")

    @property
    def order(self) -> int:
        return self.q**self.rank

    @property
    def is_square_exponent(self) -> bool:
        return valuation(self.q, self.p) % 2 == 0

    def p_excess(self) -> int:
        if self.p == 2:
            raise ValueError("p-excess is defined for odd primes; use oddity()")
        k = 1 if (not self.is_square_exponent and self.sign == -1) else 0
        return (self.rank * (self.q - 1) + 4 * k) % 8

    def oddity(self) -> int:
        if self.p != 2:
            raise ValueError("oddity is defined for 2-adic components; use p_excess()")
        k = 1 if (not self.is_square_exponent and self.sign == -1) else 0
        return (self.oddity_t + 4 * k) % 8

    def level(self) -> int:
        return 2 * self.q if self.odd else self.q

    def dual(self) -> "JordanComponent":
        if self.p != 2:
            return JordanComponent(self.p, self.q, self.rank, self.sign * kronecker(-1, self.p) ** self.rank)
        if self.odd:
            return JordanComponent(2, self.q, self.rank, self.sign, (-self.oddity_t) % 8, True)
        return self

    def symbol(self) -> str:
        s = "+" if self.sign > 0 else "-"
        if self.odd:
            return f"{self.q}_{self.oddity_t}^{s}{self.rank}"
        return f"{self.q}^{s}{self.rank}"

    def generators(self) -> tuple[list[tuple[int, Fraction]], dict[tuple[int, int], Fraction]]:
        """Cyclic generators (order, norm) and off-diagonal bilinear values of a model."""
        q = self.q
        if self.p != 2:
            good = next(a for a in range(1, q) if kronecker(2 * a, self.p) == 1)
            bad = next(a for a in range(1, q) if kronecker(2 * a, self.p) == -1)
            norms = [Fraction(good, q)] * (self.rank - 1)
            norms.append(Fraction(good if self.sign == 1 else bad, q))
            return [(q, x) for x in norms], {}
        if self.odd:
            ts = _odd_decomposition(self.rank, self.oddity_t, self.sign)
            return [(q, Fraction(t, 2 * q)) for t in ts], {}
        gens: list[tuple[int, Fraction]] = []
        pairs: dict[tuple[int, int], Fraction] = {}
        planes = self.rank // 2
        for i in range(planes):
            hyperbolic = i < planes - 1 or self.sign == 1
            x = Fraction(0) if hyperbolic else Fraction(1, q)
            pairs[(len(gens), len(gens) + 1)] = Fraction(1, q)
            gens += [(q, x), (q, x)]
        return gens, pairs


def _odd_decomposition(rank: int, t: int, sign: int) -> tuple[int, ...] | None:
    """Oddities t_i in {1,3,5,7} with sum t mod 8 and product of (2/t_i) equal to sign."""
    for ts in itertools.combinations_with_replacement((1, 3, 5, 7), rank):
        if sum(ts) % 8 == t % 8 and prod(kronecker(2, x) for x in ts) == sign:
            return ts
    return None


def canonical_component(c: JordanComponent) -> JordanComponent:
    """Rewrite an odd q = 2 component with sign +1 (t -> t + 4 changes nothing in the module)."""
    if c.p == 2 and c.odd and c.q == 2 and c.sign == -1:
        return JordanComponent(2, 2, c.rank, 1, (c.oddity_t + 4) % 8, True)
    return c


_TOKEN = re.compile(r"^(\d+)(?:_(\d+))?\^([+-])(\d+)$")


@dataclass(frozen=True)
class QuadraticCharacter:
    """A quadratic Dirichlet character stored by its local components.

    Odd primes map to "legendre" or "trivial"; the prime 2 maps to one of
    "1", "-4", "8", "-8" (the kernel symbol of the 2-adic character).
    """

    local: tuple[tuple[int, str], ...]

    def as_dict(self) -> dict[int, str]:
        return dict(self.local)

    def local_value(self, p: int, d: int) -> int:
        kind = self.as_dict().get(p, "trivial")
        if kind in ("trivial", "1"):
            return 1
        if kind == "legendre":
            return kronecker(d, p)
        return kronecker(int(kind), d)

    def __call__(self, d: int) -> int:
        return prod(self.local_value(p, d) for p, _ in self.local)

    @property
    def conductor(self) -> int:
        c = 1
        for p, kind in self.local:
            if kind == "legendre":
                c *= p
            elif kind == "-4":
                c *= 4
            elif kind in ("8", "-8"):
                c *= 8
        return c

    def nontrivial_odd_primes(self) -> list[int]:
        return [p for p, kind in self.local if p != 2 and kind == "legendre"]


@dataclass(frozen=True)
class EpsilonData:
    """The scalar-side data (N, chi, eps) attached to a discriminant form."""

    N: int
    chi: QuadraticCharacter
    eps: tuple[tuple[int, int], ...]

    @property
    def M(self) -> int:
        return self.N // 4

    def sign(self, p: int) -> int:
        return dict(self.eps)[p]

    def as_dict(self) -> dict[int, int]:
        return dict(self.eps)


@dataclass(frozen=True)
class DiscriminantForm:
    """A finite quadratic module given by its Jordan components."""

    components: tuple[JordanComponent, ...] = field(default=())

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda c: (c.p, c.q, c.odd)))
        qs = [c.q for c in comps]
        if len(set(qs)) != len(qs):
            raise ValueError("at most one Jordan component per prime power")
        object.__setattr__(self, "components", comps)

    # -- parsing and printing --------------------------------------------------

    @classmethod
    def parse(cls, symbol: str) -> "DiscriminantForm":
        symbol = symbol.strip()
        if symbol in ("", "1"):
            return cls(())
        comps = []
        for token in symbol.split("."):
            m = _TOKEN.match(token.strip())
            if not m:
                raise ValueError(f"cannot parse genus symbol component {token!r}")
            q, t, s, n = m.groups()
            q = int(q)
            pp = prime_power(q)
            if pp is None:
                raise ValueError(f"{q} is not a prime power")
            sign = 1 if s == "+" else -1
            if t is not None:
                if pp[0] != 2:
                    raise ValueError("only 2-adic components carry an oddity")
                comps.append(JordanComponent(2, q, int(n), sign, int(t), True))
            else:
                comps.append(JordanComponent(pp[0], q, int(n), sign))
        return cls(tuple(comps))

    def symbol(self) -> str:
        return ".".join(c.symbol() for c in self.components) or "1"

    def __str__(self) -> str:
        return self.symbol()

    # -- invariants ------------------------------------------------------------

    @property
    def order(self) -> int:
        return prod(c.order for c in self.components)

    @property
    def level(self) -> int:
        n = 1
        for c in self.components:
            lv = c.level()
            n = n * lv // gcd(n, lv)
        return n

    @property
    def signature(self) -> int:
        odd = sum(c.oddity() for c in self.components if c.p == 2)
        excess = sum(c.p_excess() for c in self.components if c.p != 2)
        return (odd - excess) % 8

    @property
    def primes(self) -> list[int]:
        return sorted({c.p for c in self.components})

    def p_part(self, p: int) -> list[JordanComponent]:
        return [c for c in self.components if c.p == p]

    def p_order(self, p: int) -> int:
        return prod(c.order for c in self.p_part(p))

    def dual(self) -> "DiscriminantForm":
        return DiscriminantForm(tuple(c.dual() for c in self.components))

    # -- transitivity (classification list) -----------------------------------

    def is_transitive(self) -> bool:
        return all(_transitive_part(p, self.p_part(p)) for p in self.primes)

    # -- character and epsilon data --------------------------------------------

    def character(self) -> QuadraticCharacter:
        if not self.is_transitive():
            raise ValueError("character is defined for transitive discriminant forms")
        if self.signature % 2 == 0:
            raise ValueError("character requires odd signature")
        size = self.order
        local: list[tuple[int, str]] = []
        minus = kronecker(-1, size) == -1
        part2 = [canonical_component(c) for c in self.p_part(2)]
        if part2:
            big = [c for c in part2 if c.q == 4]
            if big:
                kind = "-8" if minus else "8"
            else:
                kind = "-4" if minus else "1"
            local.append((2, kind))
        for p in self.primes:
            if p == 2:
                continue
            local.append((p, "legendre" if valuation(size, p) == 1 else "trivial"))
        chi = QuadraticCharacter(tuple(local))
        if chi(-1) != 1:
            raise ArithmeticError("character data is not even")
        return chi

    def _check_shape(self) -> tuple[int, int]:
        """Validate D_2 = 2^{+1}_t and level 4M with M odd square-free; return (N, t)."""
        part2 = [canonical_component(c) for c in self.p_part(2)]
        if not (len(part2) == 1 and part2[0].q == 2 and part2[0].rank == 1 and part2[0].odd):
            raise ValueError(f"D_2 must be 2^{{+1}}_t; got {self.symbol()}")
        N = self.level
        M = N // 4
        if N != 4 * M or M % 2 == 0 or not is_squarefree(M):
            raise ValueError(f"level {N} is not 4M with M odd square-free")
        if not self.is_transitive():
            raise ValueError(f"{self.symbol()} is not transitive")
        return N, part2[0].oddity_t

    def epsilon_vector(self) -> EpsilonData:
        return self._epsilon_data

    @cached_property
    def _epsilon_data(self) -> EpsilonData:
        N, t = self._check_shape()
        M = N // 4
        chi = self.character()
        t_sign = 1 if t % 4 == 1 else -1
        eps = [(2, t_sign * kronecker(-1, N))]
        for p in chi.nontrivial_odd_primes():
            (comp,) = self.p_part(p)
            eps.append((p, kronecker(2 * M // p, p) * comp.sign))
        return EpsilonData(N, chi, tuple(eps))

    def represents_norm(self, n: int) -> bool:
        """Whether n/N (N the level) is a norm of D, via the epsilon data."""
        data = self.epsilon_vector()
        eps = data.as_dict()
        if n % 4 not in (0, eps[2] % 4):
            return False
        for p in data.chi.nontrivial_odd_primes():
            if kronecker(n, p) not in (0, eps[p]):
                return False
        return True

    def s_of(self, n: int) -> Fraction:
        N, _ = self._check_shape()
        M = N // 4
        g = gcd(M, n) if n else M
        out = Fraction(1)
        for p in self.primes:
            if p != 2 and g % p == 0:
                out *= 1 + Fraction(p, self.p_order(p))
        return out

    # -- construction from scalar data -----------------------------------------

    @classmethod
    def from_epsilon(cls, N: int, eps: dict[int, int]) -> "DiscriminantForm":
        """Rebuild D from N = 4M and signs eps over 2 and the conductor primes.

        Odd primes p | M missing from eps get the anisotropic plane p^{+-2}.
        """
        M = N // 4
        if N != 4 * M or M % 2 == 0 or not is_squarefree(M):
            raise ValueError(f"level {N} is not 4M with M odd square-free")
        if eps.get(2) not in (1, -1):
            raise ValueError("eps must contain a sign for p = 2")
        t = 1 if eps[2] * kronecker(-1, N) == 1 else 7
        comps = [JordanComponent(2, 2, 1, 1, t, True)]
        for p in prime_divisors(M):
            if p in eps:
                delta = eps[p] * kronecker(2 * M // p, p)
                comps.append(JordanComponent(p, p, 1, delta))
            else:
                comps.append(JordanComponent(p, p, 2, 1 if p % 4 == 3 else -1))
        extra = set(eps) - {2} - {c.p for c in comps}
        if extra:
            raise ValueError(f"eps has entries at primes not dividing M: {sorted(extra)}")
        D = cls(tuple(comps))
        if D.epsilon_vector().as_dict() != {p: s for p, s in eps.items()}:
            raise ArithmeticError("epsilon reconstruction is inconsistent")
        return D

    @classmethod
    def from_level(cls, N: int) -> "DiscriminantForm":
        """The level-N form with every eps_p = +1 and chi_p nontrivial for all p | M."""
        M = N // 4
        if N != 4 * M or M % 2 == 0 or not is_squarefree(M):
            raise ValueError(f"level {N} is not 4M with M odd square-free")
        eps = {2: 1}
        eps.update({p: 1 for p in prime_divisors(M)})
        return cls.from_epsilon(N, eps)

    # -- explicit model ----------------------------------------------------------

    @cached_property
    def _model(self):
        """Per-prime generator data: {p: (gens, pairs, offset)} over a flat generator list."""
        gens: list[tuple[int, Fraction]] = []
        pairs: dict[tuple[int, int], Fraction] = {}
        blocks: list[tuple[int, int, int]] = []
        for p in self.primes:
            start = len(gens)
            for c in self.p_part(p):
                g, b = c.generators()
                base = len(gens)
                gens.extend(g)
                pairs.update({(i + base, j + base): v for (i, j), v in b.items()})
            blocks.append((p, start, len(gens)))
        return gens, pairs, blocks

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        """Elements as coefficient tuples, CRT-ordered: index i lifts to (i mod |D_p|)_p."""
        gens, _, blocks = self._model
        per_prime = []
        for _, a, b in blocks:
            per_prime.append(list(itertools.product(*(range(gens[i][0]) for i in range(a, b)))))
        out = []
        for i in range(self.order):
            elt: tuple[int, ...] = ()
            for lst in per_prime:
                elt += lst[i % len(lst)]
            out.append(elt)
        return tuple(out)

    def norm(self, x: tuple[int, ...]) -> Fraction:
        gens, pairs, _ = self._model
        v = sum((g[1] * xi * xi for g, xi in zip(gens, x)), Fraction(0))
        for (i, j), b in pairs.items():
            v += b * x[i] * x[j]
        return v % 1

    def bilinear(self, x: tuple[int, ...], y: tuple[int, ...]) -> Fraction:
        gens, pairs, _ = self._model
        v = sum((2 * g[1] * a * b for g, a, b in zip(gens, x, y)), Fraction(0))
        for (i, j), b in pairs.items():
            v += b * (x[i] * y[j] + x[j] * y[i])
        return v % 1

    def bilinear_table(self) -> "np.ndarray":
        """Integer matrix of level * (x_a, x_b) mod level over the enumerated elements."""
        gens, pairs, _ = self._model
        L = self.level
        k = len(gens)
        G = np.zeros((k, k), dtype=np.int64)
        for i, g in enumerate(gens):
            G[i, i] = int(2 * g[1] * L) % L
        for (i, j), b in pairs.items():
            G[i, j] = G[j, i] = int(b * L) % L
        X = np.array(self.elements, dtype=np.int64).reshape(self.order, k)
        return (X @ G @ X.T) % L

    def negate(self, x: tuple[int, ...]) -> tuple[int, ...]:
        gens, _, _ = self._model
        return tuple((-a) % g[0] for g, a in zip(gens, x))


def _transitive_part(p: int, comps: list[JordanComponent]) -> bool:
    if not comps:
        return True
    if p != 2:
        if len(comps) != 1 or comps[0].q != p:
            return False
        c = comps[0]
        if c.rank == 1:
            return True
        return c.rank == 2 and c.sign == (1 if p % 4 == 3 else -1)
    comps = [canonical_component(c) for c in comps]
    shape = sorted((c.q, c.odd, c.rank, c.sign, c.oddity_t) for c in comps)
    if len(shape) == 1:
        q, odd, rank, sign, t = shape[0]
        if q == 2 and odd and sign == 1:
            return (rank, t) in {(3, 3), (3, 5), (2, 2), (2, 6), (1, 1), (1, 7)}
        if q == 2 and not odd:
            return rank == 2 and sign == -1
        return q == 4 and odd and rank == 1
    if len(shape) == 2:
        (q1, odd1, r1, s1, t1), (q2, odd2, r2, _, _) = shape
        # 2_7^{+1} + 4_t is 2_1^{+1} + 4_{t'} after oddity fusion and sign walking.
        return (q1, odd1, r1, s1) == (2, True, 1, 1) and t1 in (1, 7) and (q2, odd2, r2) == (4, True, 1)
    return False


def _local_transitive_options(p: int) -> list[tuple[JordanComponent, ...]]:
    """Transitive p-parts from the classification, each a tuple of Jordan components."""
    if p != 2:
        plane = 1 if p % 4 == 3 else -1
        return [
            (JordanComponent(p, p, 1, 1),),
            (JordanComponent(p, p, 1, -1),),
            (JordanComponent(p, p, 2, plane),),
        ]
    out: list[tuple[JordanComponent, ...]] = [
        (JordanComponent(2, 2, 3, 1, 3, True),),
        (JordanComponent(2, 2, 3, 1, 5, True),),
        (JordanComponent(2, 2, 2, 1, 2, True),),
        (JordanComponent(2, 2, 2, 1, 6, True),),
        (JordanComponent(2, 2, 1, 1, 1, True),),
        (JordanComponent(2, 2, 1, 1, 7, True),),
        (JordanComponent(2, 2, 2, -1),),
    ]
    for t in (1, 3, 5, 7):
        c = JordanComponent(2, 4, 1, kronecker(2, t), t, True)
        out.append((c,))
        out.append((JordanComponent(2, 2, 1, 1, 1, True), c))
    return out


def transitive_forms(max_order: int) -> list[DiscriminantForm]:
    """Every transitive discriminant form of order at most max_order, smallest first."""
    primes = [p for p in range(2, max_order + 1) if prime_power(p) == (p, 1)]
    found: list[DiscriminantForm] = [DiscriminantForm(())]

    def extend(i: int, comps: tuple[JordanComponent, ...], size: int) -> None:
        for j in range(i, len(primes)):
            p = primes[j]
            if size * p > max_order:
                break
            for option in _local_transitive_options(p):
                o = prod(c.order for c in option)
                if size * o <= max_order:
                    found.append(DiscriminantForm(comps + option))
                    extend(j + 1, comps + option, size * o)

    extend(0, (), 1)
    return sorted(found, key=lambda D: (D.order, D.symbol()))
