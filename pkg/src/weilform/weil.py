"""Numeric Weil representation matrices for the generators S and T."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .discriminant import DiscriminantForm


def _e(x) -> complex:
    return complex(np.exp(2j * np.pi * float(x)))


@dataclass(frozen=True)
class NormClassIndex:
    """Partition of the explicit module into fibres of the norm map."""

    classes: tuple[tuple[int, ...], ...]
    class_norm: tuple[Fraction, ...]

    @property
    def class_size(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def index_of_norm(self, nu: Fraction) -> int:
        return self.class_norm.index(Fraction(nu) % 1)

    def class_of_element(self) -> dict[int, int]:
        return {i: k for k, members in enumerate(self.classes) for i in members}


def norm_classes(D: DiscriminantForm) -> NormClassIndex:
    if not D.is_transitive():
        raise ValueError(f"{D.symbol()} is not transitive; norm fibres are not Aut(D)-orbits")
    fibres: dict[Fraction, list[int]] = {}
    for i, x in enumerate(D.elements):
        fibres.setdefault(D.norm(x), []).append(i)
    norms = sorted(fibres)
    return NormClassIndex(tuple(tuple(fibres[n]) for n in norms), tuple(norms))


@dataclass(frozen=True)
class WeilRep:
    """rho_D on the group algebra C[D], one basis vector per enumerated element."""

    D: DiscriminantForm
    mat_T: np.ndarray = field(init=False, repr=False, compare=False)
    mat_S: np.ndarray = field(init=False, repr=False, compare=False)
    mat_Z: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elts = self.D.elements
        n = len(elts)
        T = np.diag([_e(self.D.norm(x)) for x in elts])
        factor = _e(Fraction(-self.D.signature, 8)) / np.sqrt(n)
        S = factor * np.exp(-2j * np.pi * self.D.bilinear_table() / self.D.level)
        for m in (T, S):
            m.setflags(write=False)
        Z = S @ S
        Z.setflags(write=False)
        object.__setattr__(self, "mat_T", T)
        object.__setattr__(self, "mat_S", S)
        object.__setattr__(self, "mat_Z", Z)

    @property
    def dim(self) -> int:
        return self.mat_T.shape[0]

    def rho_T(self) -> np.ndarray:
        return self.mat_T

    def rho_S(self) -> np.ndarray:
        return self.mat_S

    def rho_word(self, word: Sequence[str]) -> np.ndarray:
        """Ordered product rho(A_1) rho(A_2) ... for generators 'S', 'T', 'T^-1'."""
        if not word:
            raise ValueError("word must be nonempty")
        images = {
            "S": self.mat_S,
            "T": self.mat_T,
            "T^-1": self.mat_T.conj(),
            "Ti": self.mat_T.conj(),
        }
        out = np.eye(self.dim, dtype=complex)
        for g in word:
            if g not in images:
                raise ValueError(f"unknown generator {g!r}")
            out = out @ images[g]
        return out

    def relation_residuals(self) -> dict[str, float]:
        """Sup-norm residuals of the defining relations and unitarity."""
        eye = np.eye(self.dim)
        S, T, Z = self.mat_S, self.mat_T, self.mat_Z

        def sup(m):
            return float(np.max(np.abs(m))) if m.size else 0.0

        ST = S @ T
        Z2 = Z @ Z
        return {
            "unitary_S": sup(S @ S.conj().T - eye),
            "unitary_T": sup(T @ T.conj().T - eye),
            "S2_Z": sup(S @ S - Z),
            "ST3_Z": sup(ST @ ST @ ST - Z),
            "Z4_I": sup(Z2 @ Z2 - eye),
            "Z2T_TZ2": sup(Z2 @ T - T @ Z2),
            "Z_permutation": sup(Z - self.expected_Z()),
        }

    def expected_Z(self) -> np.ndarray:
        """rho(Z) e_gamma = i^{-r} e_{-gamma} (column gamma carries the image)."""
        elts = self.D.elements
        index = {x: i for i, x in enumerate(elts)}
        Z = np.zeros((self.dim, self.dim), dtype=complex)
        c = _e(Fraction(-self.D.signature, 4))
        for i, x in enumerate(elts):
            Z[index[self.D.negate(x)], i] = c
        return Z
