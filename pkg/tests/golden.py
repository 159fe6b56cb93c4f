"""Printed level-12 and level-4 tables, transcribed as {exponent: coefficient}."""

from fractions import Fraction as F

WEIGHT_HALF_12 = {
    0: ({0: F(1, 2), 1: 1, 4: 1, 9: 1}, 16),
    -3: ({-3: F(1, 2), 1: -7, 4: 20, 9: -39, 12: 84, 13: -189}, 16),
    -8: ({-8: 1, 1: -34, 4: -188, 9: 2430, 12: 8262, 13: -11968}, 16),
    -11: ({-11: 1, 1: 22, 4: -552, 9: -11178, 12: 48600, 13: 76175}, 16),
}

WEIGHT_THREE_HALVES_12 = {
    -1: ({-1: 1, 0: -1, 3: 7, 8: 34, 11: -22, 12: -26}, 15),
    -4: ({-4: 1, 0: -1, 3: -20, 8: 188, 11: 552, 12: -701}, 15),
    -9: ({-9: F(1, 2), 0: -1, 3: 39, 8: -2430, 11: 11178, 12: -8826}, 15),
    -12: ({-12: F(1, 2), 3: -84, 8: -8262, 11: -48600, 12: -41412}, 15),
}

G_0 = ({0: 1, 3: 2, 4: 6, 7: 12}, 12)
G_1 = ({1: 1, 3: 1, 4: 2, 6: 2, 7: 2, 9: 1, 10: 4}, 12)
G_2 = ({2: 1, 4: -1, 5: 2, 6: 1, 7: -2, 8: 1, 9: 2, 11: 2}, 12)

HURWITZ_G = ({0: F(-1, 12), 3: F(1, 3), 4: F(1, 2), 7: 1, 8: 1, 11: 1}, 12)
G_EPS_STAR = ({0: F(-1, 6), 3: F(1, 6), 8: 1, 11: 1}, 12)

E1 = ({0: 1, 1: 6, 3: 6, 4: 6, 7: 12, 9: 6}, 12)
PSI_F_MINUS_3_EXPONENTS = (-7, 20, -78, 344)


def matches(series, table) -> bool:
    """Every coefficient below the printed O-term equals the table (zero where absent)."""
    terms, bound = table
    lo = min(min(terms), 0)
    return all(series.coefficient(n) == F(terms.get(n, 0)) for n in range(lo, bound))
