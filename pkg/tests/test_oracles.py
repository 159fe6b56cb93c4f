from fractions import Fraction as F

import pytest

from oracles import (
    ExplicitModule,
    all_symbols,
    bqf_class_count,
    euler_pentagonal,
    hurwitz_oracle,
    norm_census,
    sum_of_two_squares,
)
from weilform.discriminant import DiscriminantForm


def test_bqf_examples():
    assert bqf_class_count(-3) == F(1, 3)
    assert bqf_class_count(-4) == F(1, 2)
    assert bqf_class_count(-23) == 3
    assert bqf_class_count(-12) == F(4, 3)
    for bad in (0, 5, -5, -6):
        with pytest.raises(ValueError):
            bqf_class_count(bad)


def test_hurwitz_oracle_conventions():
    assert hurwitz_oracle(0) == F(-1, 12)
    assert hurwitz_oracle(1) == hurwitz_oracle(2) == 0
    assert hurwitz_oracle(12) == F(4, 3)


def test_census_examples():
    assert norm_census(ExplicitModule.from_symbol("2_7^+1.3^-1")) == {F(0): 1, F(1, 12): 2, F(1, 3): 2, F(3, 4): 1}
    assert norm_census(ExplicitModule.from_symbol("1")) == {F(0): 1}
    census = norm_census(ExplicitModule.from_symbol("3^+2"))
    assert census == {F(0): 1, F(1, 3): 4, F(2, 3): 4}


@pytest.mark.parametrize("symbol", ["2_7^+1.3^-1", "3^+2", "2^-2", "4_3^-1", "5^-2.2_1^+1", "2_1^+1.4_7^+1"])
def test_models_are_nondegenerate(symbol):
    E = ExplicitModule.from_symbol(symbol)
    assert E.is_nondegenerate()
    D = DiscriminantForm.parse(symbol)
    assert len(E) == D.order and E.gauss_signature() == D.signature % 8


def test_lattice_model_agrees_with_symbol_model():
    """A_2 has discriminant module 3^{-1}; [[2, 1], [1, 4]] gives 7^{+1}."""
    assert norm_census(ExplicitModule.from_gram([[2, 1], [1, 2]])) == norm_census(ExplicitModule.from_symbol("3^-1"))
    assert norm_census(ExplicitModule.from_gram([[2, 1], [1, 4]])) == norm_census(ExplicitModule.from_symbol("7^+1"))
    with pytest.raises(ValueError):
        ExplicitModule.from_gram([[3]])


def test_brute_force_transitivity_examples():
    assert ExplicitModule.from_symbol("2_7^+1.3^-1").is_transitive()
    assert not ExplicitModule.from_symbol("9^+1").is_transitive()
    assert not ExplicitModule.from_symbol("5^+2").is_transitive()
    assert ExplicitModule.from_symbol("5^-2").is_transitive()


def test_symbol_enumeration():
    symbols = all_symbols(12)
    assert "1" in symbols and "2_7^+1.3^-1" in symbols and "2^-2" in symbols
    assert len(symbols) == len(set(symbols))
    assert all(DiscriminantForm.parse(s).order <= 12 for s in symbols)


def test_integer_series_oracles():
    assert euler_pentagonal(8) == [1, -1, -1, 0, 0, 1, 0, 1]
    assert [sum_of_two_squares(n) for n in range(6)] == [1, 4, 4, 0, 4, 8]
