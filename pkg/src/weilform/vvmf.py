"""Vector-valued forms for rho_D indexed by norm classes, and the maps psi_D, phi_D."""

from __future__ import annotations

import cmath
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Mapping, Sequence

import numpy as np

from .discriminant import DiscriminantForm
from .qseries import FracQSeries
from .weil import NormClassIndex, WeilRep, norm_classes


@dataclass(frozen=True, eq=False)
class VectorForm:
    """One q^(1/N)-series per norm class (shared by every element of the class)."""

    D: DiscriminantForm
    weight: Fraction
    components: dict[Fraction, FracQSeries]

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))
        if (2 * self.weight - self.D.signature) % 4:
            raise ValueError("weight and signature are incompatible (need 2k = r mod 4)")

    @property
    def classes(self) -> NormClassIndex:
        return norm_classes(self.D)

    def component(self, norm: Fraction) -> FracQSeries:
        return self.components[Fraction(norm) % 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorForm):
            return NotImplemented
        return self.D == other.D and self.weight == other.weight and self.components == other.components

    def to_json(self) -> dict:
        return {
            "genus": self.D.symbol(),
            "weight": str(self.weight),
            "components": {str(nu): f.to_json() for nu, f in sorted(self.components.items())},
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "VectorForm":
        D = DiscriminantForm.parse(payload["genus"])
        comps = {Fraction(nu): FracQSeries.from_json(f) for nu, f in payload["components"].items()}
        return cls(D, Fraction(payload["weight"]), comps)


def _psi_factor(D: DiscriminantForm, n: int) -> Fraction:
    """s(n) (M/(M,n)) / |D_{M/(M,n)}| from the explicit isomorphism."""
    M = D.level // 4
    g = gcd(M, n) if n else M
    m = M // g
    size = prod(D.p_order(p) for p in D.primes if p != 2 and m % p == 0)
    return D.s_of(n) * Fraction(m, size)


def psi(D: DiscriminantForm, f: FracQSeries, k: Fraction) -> VectorForm:
    """Scalar form in A^eps -> Aut(D)-invariant vector-valued form."""
    k = Fraction(k)
    if (2 * k - D.signature) % 4:
        raise ValueError("weight and signature are incompatible (need 2k = r mod 4)")
    if f.denom != 1:
        raise ValueError("psi expects a series in integral powers of q")
    N = D.level
    index = norm_classes(D)
    comps: dict[Fraction, dict[int, Fraction]] = {nu: {} for nu in index.class_norm}
    for e, c in f.items():
        n = int(e)
        if not D.represents_norm(n):
            raise ValueError(f"coefficient at q^{n} violates the eps-condition of {D.symbol()}")
        comps[Fraction(n, N) % 1][n] = _psi_factor(D, n) * c
    trunc = f.trunc
    return VectorForm(D, k, {nu: FracQSeries(terms, trunc, N) for nu, terms in comps.items()})


def phi(F: VectorForm) -> FracQSeries:
    """Vector-valued form -> scalar form: s(0)^{-1} sum_gamma F_gamma(N tau)."""
    N = F.D.level
    index = F.classes
    out = None
    for nu, size in zip(index.class_norm, index.class_size):
        term = F.components[nu].rescale(N).scale(size)
        out = term if out is None else out + term
    return out.scale(1 / F.D.s_of(0))


def check_T(F: VectorForm) -> bool:
    for nu, series in F.components.items():
        for e, _ in series.items():
            if (e - nu).denominator != 1:
                return False
    return True


def default_sample_points(count: int = 5, seed: int = 0) -> list[complex]:
    """Points near the unit circle, where both tau and -1/tau lie high in the half-plane."""
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        theta = rng.uniform(1.15, 2.0)
        r = rng.uniform(0.95, 1.05)
        pts.append(cmath.rect(r, theta))
    return pts


def _numeric(series: FracQSeries, num_terms: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    exps, coeffs = [], []
    for e, c in series.items():
        if e * N < num_terms:
            exps.append(float(e))
            coeffs.append(float(c))
    return np.array(exps, dtype=float), np.array(coeffs, dtype=float)


def _evaluate(exps: np.ndarray, coeffs: np.ndarray, tau: complex) -> complex:
    if exps.size == 0:
        return 0j
    return complex(np.sum(coeffs * np.exp(2j * np.pi * exps * tau)))


def check_S(F: VectorForm, num_terms: int = 200, sample_points: Sequence[complex] | None = None) -> float:
    """max |tau^{-k} F(-1/tau) - rho(S) F(tau)| over the sample points."""
    points = list(sample_points) if sample_points is not None else default_sample_points()
    if any(p.imag < 0.5 for p in points):
        raise ValueError("sample points need imaginary part at least 0.5")
    D = F.D
    N = D.level
    W = WeilRep(D)
    index = F.classes
    owner = index.class_of_element()
    numeric = {}
    for nu in index.class_norm:
        series = F.components[nu]
        if series.trunc is not None and series.precision * N < num_terms:
            warnings.warn(f"component {nu} is truncated below the requested {num_terms} terms", stacklevel=2)
        numeric[nu] = _numeric(series, num_terms, N)
    worst_tail = 0.0
    residual = 0.0
    for tau in points:
        tau = complex(tau)
        sigma = -1 / tau
        vals_tau = {nu: _evaluate(*numeric[nu], tau) for nu in index.class_norm}
        vals_sig = {nu: _evaluate(*numeric[nu], sigma) for nu in index.class_norm}
        v_tau = np.array([vals_tau[index.class_norm[owner[i]]] for i in range(W.dim)])
        v_sig = np.array([vals_sig[index.class_norm[owner[i]]] for i in range(W.dim)])
        factor = cmath.exp(-float(F.weight) * cmath.log(tau))
        diff = factor * v_sig - W.mat_S @ v_tau
        residual = max(residual, float(np.max(np.abs(diff))))
        y = min(tau.imag, sigma.imag)
        for exps, coeffs in numeric.values():
            if exps.size:
                tail = float(np.max(np.abs(coeffs[-3:]))) * np.exp(-2 * np.pi * y * exps[-1])
                worst_tail = max(worst_tail, tail)
    if worst_tail > 1e-8:
        warnings.warn(f"truncation tail estimate {worst_tail:.2e} may dominate the residual", stacklevel=2)
    return residual


def component_zero_determines(F: VectorForm) -> bool:
    """If the norm-0 component vanishes, every component must vanish."""
    zero = F.components[Fraction(0)]
    if not zero.is_zero():
        return True
    return all(s.is_zero() for s in F.components.values())


def is_holomorphic(F: VectorForm) -> bool:
    return all(e >= 0 for s in F.components.values() for e, _ in s.items())


def is_cuspidal(F: VectorForm) -> bool:
    return all(e > 0 for s in F.components.values() for e, _ in s.items())
