"""Scalar spaces A^eps(N, k, 1): reduced bases, Hurwitz class numbers, G^{eps*}.

Every form in these spaces is theta^{2k} times a weight-0 function on Gamma_0(N)
that is holomorphic on the upper half-plane (theta has no zeros there).  For the
supported genus-zero levels such functions are polynomials in Hauptmoduln t_d
(simple pole at the cusp 1/d only) and in j(N tau).  The eps-condition is a set
of coefficient-vanishing constraints, imposed by exact linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor, gcd
from typing import Iterable, Mapping

from .arith import fundamental_part, kronecker, prime_divisors
from .discriminant import DiscriminantForm
from .errors import InconsistencyError, InsufficientOrderError
from .levels import level_data
from .linalg import nullspace, rref, solve
from .qseries import FracQSeries, eisenstein_series, eta_quotient, j_invariant, theta

KINDS = ("weak", "holomorphic", "cuspidal")

# A recipe key (a, d, b) stands for theta^{2k} j(N tau)^a t_d^b; d = 0 when b = 0.
Key = tuple[int, int, int]


@dataclass(frozen=True)
class EpsilonSpaceSpec:
    """The space A^eps(N, k, 1) attached to a discriminant form D."""

    D: DiscriminantForm
    k: Fraction
    kind: str = "weak"

    def __post_init__(self):
        k = Fraction(self.k)
        object.__setattr__(self, "k", k)
        if (2 * k).denominator != 1 or (2 * k).numerator % 2 == 0:
            raise ValueError(f"weight {k} is not half-integral")
        if (int(2 * k) - self.D.signature) % 4:
            raise ValueError(f"weight {k} is incompatible with signature {self.D.signature} (need 2k = r mod 4)")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        data = self.D.epsilon_vector()
        if sorted(data.chi.nontrivial_odd_primes()) != prime_divisors(data.M):
            raise ValueError("the pipeline needs chi_p nontrivial for every p | M")

    @property
    def N(self) -> int:
        return self.D.level

    @property
    def M(self) -> int:
        return self.N // 4

    @property
    def eps(self):
        return self.D.epsilon_vector()

    def dual(self, kind: str | None = None) -> "EpsilonSpaceSpec":
        return EpsilonSpaceSpec(self.D.dual(), 2 - self.k, kind or self.kind)

    def allowed(self, n: int) -> bool:
        return self.D.represents_norm(n)

    def s(self, n: int) -> Fraction:
        return self.D.s_of(n)


def allowed_exponent(spec: EpsilonSpaceSpec, n: int) -> bool:
    return spec.D.represents_norm(n)


def valence_bound(N: int, k: Fraction) -> Fraction:
    """Upper bound k [SL2(Z):Gamma_0(N)]/12 for the order at infinity of a holomorphic form."""
    return Fraction(k) * level_data(N).index / 12


def elimination_bound(spec: EpsilonSpaceSpec, min_exp: int) -> int:
    return ceil(valence_bound(spec.N, spec.k)) + abs(min_exp) + 2


# -- monomials theta^{2k} j(N tau)^a t_d^b ------------------------------------------


def _hauptmodul_valuation(N: int, d: int) -> int:
    r = level_data(N).hauptmodul(d)
    return sum(delta * x for delta, x in r.items()) // 24


def key_valuation(N: int, key: Key) -> int:
    a, d, b = key
    return -N * a + (b * _hauptmodul_valuation(N, d) if b else 0)


@lru_cache(maxsize=64)
def _theta_power(k2: int, order: int) -> FracQSeries:
    return theta(order) ** k2


@lru_cache(maxsize=64)
def _e4_cubed_power(N: int, a: int, order: int) -> FracQSeries:
    e4 = eisenstein_series(4, -(-order // N))
    return (e4 ** (3 * a)).rescale(N).truncate(order)


@lru_cache(maxsize=4096)
def monomial_series(N: int, k2: int, key: Key, order: int) -> FracQSeries:
    """theta^{k2} j(N tau)^a t_d^b known to O(q^order) (absolute)."""
    a, d, b = key
    v = key_valuation(N, key)
    rel = order - v
    if rel <= 0:
        return FracQSeries.zero(order)
    r: dict[int, int] = {}
    if b:
        r = {delta: b * x for delta, x in level_data(N).hauptmodul(d).items()}
    if a:
        # j(N tau)^a = E4(N tau)^{3a} / Delta(N tau)^a
        r[N] = r.get(N, 0) - 24 * a
    series = _theta_power(k2, rel)
    if any(r.values()):
        series = series * eta_quotient(r, rel)
    if a:
        series = series * _e4_cubed_power(N, a, rel)
    return series.truncate(order)


def evaluate_recipe(N: int, k: Fraction, recipe: Mapping[Key, Fraction], order: int) -> FracQSeries:
    k2 = int(2 * k)
    out = FracQSeries.zero(order)
    for key, c in sorted(recipe.items()):
        if c:
            out = out + monomial_series(N, k2, key, order).scale(c)
    return out


def _pole_allowance(N: int, d: int, P: int) -> Fraction:
    """Pole order at the cusp 1/d allowed for f with ord_inf(f) >= -P in an eps-space."""
    return Fraction(P * gcd(N, d) ** 2, N * gcd(d * d, N))


def ambient_keys(N: int, k: Fraction, P: int, holomorphic: bool = False) -> list[Key]:
    """Keys spanning theta^{2k} L(E) with E bounding the poles of eps-forms with ord >= -P."""
    lv = level_data(N)
    k2 = int(2 * k)
    keys: list[Key] = [(0, 0, 0)]
    for d in lv.cusps:
        allowance = k2 * lv.theta_order(d)
        if not holomorphic:
            allowance += _pole_allowance(N, d, P) + (0 if d == N else 1)
        for b in range(1, max(0, floor(allowance)) + 1):
            keys.append((0, d, b))
    return keys


# -- seeds ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeedForm:
    series: FracQSeries
    weight: Fraction
    recipe: tuple[tuple[Key, Fraction], ...]


def seed_forms(N: int, k: Fraction, order: int = 50) -> list[SeedForm]:
    """A basis of M(N, k, 1): theta^{2k} times Hauptmodul powers with bounded poles."""
    k = Fraction(k)
    if k <= 0 or (2 * k).denominator != 1 or (2 * k).numerator % 2 == 0:
        raise ValueError("seed forms need a positive half-integral weight")
    keys = ambient_keys(N, k, 0, holomorphic=True)
    k2 = int(2 * k)
    seeds = [SeedForm(monomial_series(N, k2, key, order), k, ((key, Fraction(1)),)) for key in keys]
    return seeds


def holomorphic_dimension(N: int, k: Fraction) -> int:
    """Riemann-Roch on the genus-zero curve X_0(N): 1 + sum_d floor(2k ord_d theta)."""
    lv = level_data(N)
    return 1 + sum(max(0, floor(int(2 * k) * lv.theta_order(d))) for d in lv.cusps)


# -- reduced bases ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ReducedBasis:
    """Reduced forms f_m = (1/s(m)) q^m + ... of an eps-space, keyed by m."""

    spec: EpsilonSpaceSpec
    min_exp: int
    order: int
    forms: dict[int, FracQSeries]
    exists_set: frozenset[int]
    obstructed_set: frozenset[int]
    recipes: dict[int, dict[Key, Fraction]] = field(default_factory=dict)

    def form(self, m: int) -> FracQSeries:
        if m not in self.forms:
            raise KeyError(f"f_{m} does not exist in this basis")
        return self.forms[m]

    def coefficient(self, m: int, n: int) -> Fraction:
        return self.form(m).coefficient(n)

    def leading_exponents(self) -> list[int]:
        return sorted(self.forms)

    def evaluate(self, m: int, order: int) -> FracQSeries:
        """Re-expand f_m to another truncation order from its recipe."""
        if order <= self.order:
            return self.form(m).truncate(order)
        if m not in self.recipes:
            raise ValueError(f"no recipe stored for f_{m}")
        return evaluate_recipe(self.spec.N, self.spec.k, self.recipes[m], order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReducedBasis):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.min_exp == other.min_exp
            and self.order == other.order
            and self.forms == other.forms
            and self.exists_set == other.exists_set
            and self.obstructed_set == other.obstructed_set
            and self.recipes == other.recipes
        )

    def to_json(self) -> dict:
        return {
            "level": self.spec.N,
            "weight": str(self.spec.k),
            "genus": self.spec.D.symbol(),
            "eps": {str(p): s for p, s in self.spec.eps.eps},
            "kind": self.spec.kind,
            "min_exp": self.min_exp,
            "order": self.order,
            "forms": {str(m): f.to_json() for m, f in sorted(self.forms.items())},
            "exists": sorted(self.exists_set),
            "obstructed": sorted(self.obstructed_set),
            "recipes": {
                str(m): [[list(key), str(c)] for key, c in sorted(r.items())]
                for m, r in sorted(self.recipes.items())
            },
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "ReducedBasis":
        try:
            spec = EpsilonSpaceSpec(
                DiscriminantForm.parse(payload["genus"]), Fraction(payload["weight"]), payload.get("kind", "weak")
            )
            forms = {int(m): FracQSeries.from_json(f) for m, f in payload["forms"].items()}
            recipes = {
                int(m): {tuple(int(x) for x in key): Fraction(c) for key, c in r}
                for m, r in payload.get("recipes", {}).items()
            }
            return cls(
                spec,
                int(payload["min_exp"]),
                int(payload["order"]),
                dict(sorted(forms.items())),
                frozenset(int(x) for x in payload["exists"]),
                frozenset(int(x) for x in payload["obstructed"]),
                recipes,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed basis payload: {exc}") from None


@dataclass
class _Row:
    lead: int
    series: FracQSeries
    recipe: dict[Key, Fraction]


def _coefficient_rows(series: list[FracQSeries], lo: int, hi: int) -> list[list[Fraction]]:
    rows = []
    for f in series:
        c = f.coeffs if f.denom == 1 else {}
        if f.denom != 1:
            raise InconsistencyError("integral-exponent series expected")
        rows.append([c.get(e, Fraction(0)) for e in range(lo, hi)])
    return rows


def _reduce(rows: list[_Row], lo: int, hi: int) -> list[_Row]:
    """Echelonize series over exponents [lo, hi) together with their recipes."""
    if not rows:
        return []
    keys = sorted({key for r in rows for key in r.recipe})
    width = hi - lo
    mat = _coefficient_rows([r.series for r in rows], lo, hi)
    for row, r in zip(mat, rows):
        row.extend(r.recipe.get(key, Fraction(0)) for key in keys)
    red, pivots = rref(mat, width + len(keys))
    if len(pivots) != len(rows) or any(p >= width for p in pivots):
        raise InconsistencyError("forms are linearly dependent within the working window")
    out = []
    for row, p in zip(red, pivots):
        series = FracQSeries({lo + i: c for i, c in enumerate(row[:width]) if c}, hi, 1)
        recipe = {key: c for key, c in zip(keys, row[width:]) if c}
        out.append(_Row(lo + p, series, recipe))
    return out


def _epsilon_rows(spec: EpsilonSpaceSpec, P: int, W: int, holomorphic: bool = False) -> list[_Row]:
    """Reduced basis of the eps-subspace of the ambient span, constraints through q^W."""
    N, k = spec.N, spec.k
    k2 = int(2 * k)
    keys = ambient_keys(N, k, P, holomorphic)
    series = [monomial_series(N, k2, key, W) for key in keys]
    lo = min(key_valuation(N, key) for key in keys)
    full = _coefficient_rows(series, lo, W)
    forbidden = [i for i, e in enumerate(range(lo, W)) if not spec.allowed(e)]
    constraint = [[full[j][i] for j in range(len(keys))] for i in forbidden]
    null = nullspace(constraint, len(keys))
    rows = []
    for x in null:
        combo = [sum((x[j] * full[j][i] for j in range(len(keys)) if x[j]), Fraction(0)) for i in range(W - lo)]
        s = FracQSeries({lo + i: c for i, c in enumerate(combo) if c}, W, 1)
        rows.append(_Row(0, s, {key: c for key, c in zip(keys, x) if c}))
    return _reduce(rows, lo, W)


def _candidates(spec: EpsilonSpaceSpec, lo: int) -> list[int]:
    top = floor(valence_bound(spec.N, spec.k))
    return [m for m in range(lo, top + 1) if spec.allowed(m)]


def build_weak_basis(spec: EpsilonSpaceSpec, min_exp: int, order: int) -> ReducedBasis:
    """Reduced forms f_m of A^eps for every m >= min_exp, truncated at O(q^order)."""
    if spec.kind == "holomorphic":
        min_exp = max(min_exp, 0)
    elif spec.kind == "cuspidal":
        min_exp = max(min_exp, 1)
    elif min_exp > 0:
        raise ValueError("min_exp must be <= 0 for weak bases")
    bound = elimination_bound(spec, min_exp)
    if order < bound:
        raise InsufficientOrderError(f"order {order} is below the elimination bound {bound}")
    N = spec.N
    residues = sorted({r for r in range(N) if spec.allowed(r)})
    top = floor(valence_bound(N, spec.k))
    W = order + N * (ceil(Fraction(top + abs(min_exp), N)) + 1)
    if spec.kind != "weak":
        rows = _epsilon_rows(spec, 0, W, holomorphic=True)
        final = _reduce([r for r in rows if r.lead >= min_exp], min_exp, order) if rows else []
        return _assemble(spec, min_exp, order, final)
    P = N
    while True:
        rows = _epsilon_rows(spec, P, W)
        gens: dict[int, _Row] = {}
        for r in rows:
            if r.lead % N in gens and gens[r.lead % N].lead > r.lead:
                continue
            gens[r.lead % N] = r
        if set(gens) == set(residues):
            break
        if P > 4 * N + abs(min_exp):
            raise InconsistencyError(f"no generator found for residues {sorted(set(residues) - set(gens))}")
        P += N
    leads = {r.lead for r in rows}
    for res, g in gens.items():
        expected = set(range(g.lead, -P - 1, -N))
        if not expected <= leads:
            raise InconsistencyError(f"gap below the generator q^{g.lead} in residue class {res}")
    wanted = [r for r in rows if r.lead >= min_exp]
    needed = [m for m in range(min_exp, -P) if m % N in gens]
    if needed:
        jN = j_invariant(-(-(W + 2 * P + N) // N) + 1).rescale(N)
        powers = {0: FracQSeries({0: 1}, None, 1)}
        for m in needed:
            g = gens[m % N]
            a = (g.lead - m) // N
            while max(powers) < a:
                powers[max(powers) + 1] = powers[max(powers)] * jN
            series = g.series * powers[a]
            recipe = {(ka + a, kd, kb): c for (ka, kd, kb), c in g.recipe.items()}
            wanted.append(_Row(m, series, recipe))
    for r in wanted:
        if r.series.trunc < order:
            raise InconsistencyError("ladder lost too much precision")
    final = _reduce(wanted, min_exp, order)
    return _assemble(spec, min_exp, order, final)


def _assemble(spec: EpsilonSpaceSpec, min_exp: int, order: int, rows: list[_Row]) -> ReducedBasis:
    forms: dict[int, FracQSeries] = {}
    recipes: dict[int, dict[Key, Fraction]] = {}
    for r in sorted(rows, key=lambda r: r.lead):
        c = 1 / spec.s(r.lead)
        forms[r.lead] = r.series.scale(c)
        recipes[r.lead] = {key: v * c for key, v in r.recipe.items()}
    for m, f in forms.items():
        bad = [e for e, _ in f.items() if not spec.allowed(int(e))]
        if bad:
            raise InconsistencyError(f"f_{m} violates the eps-condition at q^{bad[0]}")
    candidates = _candidates(spec, min_exp)
    exists = frozenset(forms)
    return ReducedBasis(
        spec, min_exp, order, forms, exists, frozenset(m for m in candidates if m not in exists), recipes
    )


def build_holomorphic_basis(spec: EpsilonSpaceSpec, order: int, cuspidal: bool = False) -> ReducedBasis:
    kind = "cuspidal" if cuspidal else "holomorphic"
    return build_weak_basis(EpsilonSpaceSpec(spec.D, spec.k, kind), 0, order)


def existence(spec: EpsilonSpaceSpec, m: int, order: int | None = None) -> bool:
    """Whether f_m exists, cross-checked against the dual holomorphic basis."""
    if not spec.allowed(m):
        raise ValueError(f"exponent {m} is forbidden by the eps-condition")
    if order is None:
        order = elimination_bound(spec, min(m, 0)) + 2 * spec.N
    basis = build_weak_basis(EpsilonSpaceSpec(spec.D, spec.k, "weak"), min(m, 0), order)
    found = m in basis.exists_set
    if m < 0:
        dual = build_holomorphic_basis(spec.dual(), max(order, -m + 2 * spec.N))
        if found == (-m in dual.exists_set):
            raise InconsistencyError(f"existence of f_{m} disagrees with the dual obstruction space")
    return found


# -- Zagier duality --------------------------------------------------------------------


@dataclass(frozen=True)
class DualityReport:
    pairs: tuple[tuple[int, int, Fraction, Fraction], ...]
    violations: tuple[tuple[int, int, Fraction, Fraction], ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_dual_pair(A: ReducedBasis, B: ReducedBasis) -> None:
    if A.spec.D.dual() != B.spec.D or A.spec.k + B.spec.k != 2:
        raise ValueError("bases are not over dual discriminant forms with weights k and 2 - k")


def duality_check(A: ReducedBasis, B: ReducedBasis) -> DualityReport:
    """Compare a_m(-d) with -a*_d(-m) for every pair inside both truncations."""
    _check_dual_pair(A, B)
    pairs, bad = [], []
    for m, f in A.forms.items():
        for d, g in B.forms.items():
            if -d >= A.order or -m >= B.order:
                continue
            x = f.coefficient(-d)
            y = g.coefficient(-m)
            pairs.append((m, d, x, y))
            if x != -y:
                bad.append((m, d, x, y))
    if not pairs:
        raise InsufficientOrderError("no (m, d) pair lies inside both truncations")
    return DualityReport(tuple(pairs), tuple(bad))


def residue_pairing(A: ReducedBasis, B: ReducedBasis, m: int, d: int) -> Fraction:
    """sum_n s(n) a_m(n) a*_d(-n) over the finite overlap window."""
    _check_dual_pair(A, B)
    f, g = A.form(m), B.form(d)
    lo, hi = m, -d
    if hi >= A.order or -lo >= B.order:
        raise InsufficientOrderError("pairing window exceeds a truncation")
    total = Fraction(0)
    for n in range(lo, hi + 1):
        a = f.coefficient(n)
        if a:
            total += A.spec.s(n) * a * g.coefficient(-n)
    return total


# -- Hurwitz class numbers and Zagier's Eisenstein series ------------------------------


@lru_cache(maxsize=None)
def _class_number(disc: int) -> int:
    """Class number of a negative fundamental discriminant."""
    if disc in (-3, -4):
        return 1
    total = sum(kronecker(disc, r) for r in range(1, (-disc) // 2 + 1))
    h, rem = divmod(total, 2 - kronecker(disc, 2))
    if rem:
        raise ArithmeticError(f"class number formula failed at {disc}")
    return h


@lru_cache(maxsize=None)
def hurwitz(n: int) -> Fraction:
    """Hurwitz class number H(n), with H(0) = -1/12."""
    if n < 0:
        raise ValueError("Hurwitz class numbers are defined for n >= 0")
    if n == 0:
        return Fraction(-1, 12)
    if n % 4 in (1, 2):
        return Fraction(0)
    d0, f = fundamental_part(-n)
    w = {-3: 6, -4: 4}.get(d0, 2)
    total = Fraction(0)
    for d in range(1, f + 1):
        if f % d:
            continue
        term = Fraction(d)
        for p in prime_divisors(d):
            term *= 1 - Fraction(kronecker(d0, p), p)
        total += term
    return Fraction(2 * _class_number(d0), w) * total


def hurwitz_table(n_max: int) -> dict[int, Fraction]:
    return {n: hurwitz(n) for n in range(n_max + 1)}


def eisenstein_G(order: int) -> FracQSeries:
    if order < 1:
        raise ValueError("order must be at least 1")
    return FracQSeries({n: hurwitz(n) for n in range(order)}, order, 1)


def eisenstein_G_epsilon(D: DiscriminantForm, order: int) -> FracQSeries:
    """G - h with h in M(N, 3/2, 1) so that the result satisfies the eps-condition of dual(D)."""
    star = EpsilonSpaceSpec(D.dual(), Fraction(3, 2), "holomorphic")
    N = D.level
    # Solve past the valence bound so the correction is unique, then truncate.
    work = max(order, floor(valence_bound(N, Fraction(3, 2))) + N + 2)
    G = eisenstein_G(work)
    seeds = seed_forms(N, Fraction(3, 2), work)
    forbidden = [n for n in range(work) if not star.allowed(n)]
    rows = [[s.series.coefficient(n) for s in seeds] for n in forbidden]
    rhs = [G.coefficient(n) for n in forbidden]
    x, nullity = solve(rows, rhs, len(seeds))
    if x is None:
        raise InconsistencyError("no correction of G in M(N, 3/2, 1) satisfies the eps*-condition")
    if nullity:
        raise InconsistencyError("the correction of G is not unique at this order")
    out = G
    for c, s in zip(x, seeds):
        if c:
            out = out - s.series.scale(c)
    return out.truncate(order)


def iter_allowed(spec: EpsilonSpaceSpec, lo: int, hi: int) -> Iterable[int]:
    return (n for n in range(lo, hi) if spec.allowed(n))
