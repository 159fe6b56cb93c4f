"""Exact linear algebra over Q, delegating to sympy's DomainMatrix."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _to_dm(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    data = [[QQ(int(x.numerator), int(x.denominator)) if x else QQ.zero for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _from_dm(m: DomainMatrix) -> list[list[Fraction]]:
    out = []
    for row in m.to_list():
        out.append([Fraction(int(x.numerator), int(x.denominator)) for x in row])
    return out


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis (as row vectors) of {x : A x = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _to_dm(rows, ncols).nullspace()
    if ns.shape[0] == 0:
        return []
    return _from_dm(ns)


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns (zero rows dropped)."""
    if not rows:
        return [], []
    m, pivots = _to_dm(rows, ncols).rref()
    out = _from_dm(m)[: len(pivots)]
    return out, list(pivots)


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int):
    """Solve A x = b.  Returns (x or None, nullity of A)."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None, ncols - (len(pivots) - 1)
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x, ncols - len(pivots)
