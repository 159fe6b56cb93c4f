from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import ExplicitModule, all_symbols, norm_census, split_primary
from weilform.arith import kronecker
from weilform.discriminant import DiscriminantForm, JordanComponent, transitive_forms

SYMBOLS = all_symbols(100)
TRANSITIVE = transitive_forms(100)


def shaped(D):
    try:
        D.epsilon_vector()
    except ValueError:
        return False
    return True


SHAPED = [D for D in TRANSITIVE if D.primes and shaped(D)]


def test_symbol_roundtrip():
    for s in ("2_7^+1.3^-1", "2^-2", "4_3^-1", "5^-2", "1"):
        assert DiscriminantForm.parse(s).symbol() == s


def test_parse_rejects_garbage():
    for bad in ("6^+1", "3_1^+1", "2_2^+1", "x"):
        with pytest.raises(ValueError):
            DiscriminantForm.parse(bad)


def test_p_excess_examples():
    assert JordanComponent(3, 3, 1, 1).p_excess() == 2
    assert JordanComponent(3, 3, 1, -1).p_excess() == 6
    assert JordanComponent(3, 9, 1, 1).p_excess() == 0
    with pytest.raises(ValueError):
        JordanComponent(2, 2, 1, 1, 1, True).p_excess()


def test_oddity_examples():
    assert JordanComponent(2, 2, 1, 1, 7, True).oddity() == 7
    assert JordanComponent(2, 2, 2, -1).oddity() == 4
    assert JordanComponent(2, 4, 1, 1, 1, True).oddity() == 1
    with pytest.raises(ValueError):
        JordanComponent(3, 3, 1, 1).oddity()


def test_signature_and_level_examples():
    D = DiscriminantForm.parse("2_7^+1.3^-1")
    assert D.signature == 1 and D.level == 12 and D.order == 6
    assert DiscriminantForm.parse("2_1^+1").signature == 1
    assert D.dual().signature == 7
    assert DiscriminantForm.parse("3^+1").level == 3
    assert DiscriminantForm.parse("4_1^+1").level == 8


def test_transitivity_examples():
    assert DiscriminantForm.parse("2_7^+1.3^-1").is_transitive()
    assert not DiscriminantForm.parse("9^+1").is_transitive()
    assert not DiscriminantForm.parse("5^+2").is_transitive()
    assert DiscriminantForm.parse("5^-2").is_transitive()
    assert DiscriminantForm.parse("3^+2").is_transitive()


def test_character_examples():
    D = DiscriminantForm.parse("2_7^+1.3^-1")
    assert D.character().as_dict() == {2: "-4", 3: "legendre"}
    assert DiscriminantForm.parse("2_1^+1").character().as_dict() == {2: "1"}
    assert DiscriminantForm.parse("2_1^+1.3^+1").character().as_dict()[3] == "legendre"
    with pytest.raises(ValueError):
        DiscriminantForm.parse("2^-2").character()


def test_epsilon_examples():
    D = DiscriminantForm.parse("2_7^+1.3^-1")
    assert D.epsilon_vector().as_dict() == {2: 1, 3: 1}
    assert D.dual().epsilon_vector().as_dict()[3] == -1
    assert DiscriminantForm.parse("2_1^+1").epsilon_vector().as_dict() == {2: 1}
    with pytest.raises(ValueError):
        DiscriminantForm.parse("4_1^+1").epsilon_vector()


def test_dual_examples():
    assert DiscriminantForm.parse("3^-1").dual().symbol() == "3^+1"
    assert DiscriminantForm.parse("2_7^+1").dual().symbol() == "2_1^+1"


def test_represents_norm_examples():
    D = DiscriminantForm.from_level(12)
    assert D.represents_norm(1) and not D.represents_norm(2) and not D.represents_norm(7)
    assert D.represents_norm(-3)
    assert D.dual().represents_norm(-1)


def test_s_of_examples():
    D = DiscriminantForm.from_level(12)
    assert (D.s_of(3), D.s_of(1), D.s_of(0)) == (2, 1, 2)


def test_from_epsilon_roundtrip():
    for eps in ({2: 1, 3: 1}, {2: -1, 3: 1}, {2: 1, 3: -1}, {2: -1, 3: -1}):
        D = DiscriminantForm.from_epsilon(12, eps)
        assert D.epsilon_vector().as_dict() == eps
    assert DiscriminantForm.from_level(12).symbol() == "2_7^+1.3^-1"


def test_norm_census_of_level_twelve():
    E = ExplicitModule.from_symbol("2_7^+1.3^-1")
    assert norm_census(E) == {F(0): 1, F(1, 12): 2, F(1, 3): 2, F(3, 4): 1}
    assert norm_census(ExplicitModule.from_symbol("1")) == {F(0): 1}
    lattice = ExplicitModule.from_gram([[6]])
    assert norm_census(lattice) == norm_census(E)


def test_anisotropic_plane_represents_every_nonzero_norm():
    census = norm_census(ExplicitModule.from_symbol("3^+2"))
    assert set(census) == {F(0), F(1, 3), F(2, 3)}


def test_transitive_forms_are_transitive():
    assert len(TRANSITIVE) == len({D.symbol() for D in TRANSITIVE})
    assert all(D.is_transitive() and D.order <= 100 for D in TRANSITIVE)


# -- properties ---------------------------------------------------------------------------


@given(st.sampled_from(SYMBOLS))
def test_oddity_formula_against_gauss_sum(symbol):
    D = DiscriminantForm.parse(symbol)
    E = ExplicitModule.from_symbol(symbol)
    assert E.gauss_signature() == D.signature % 8
    assert norm_census(E) == dict(Counter(D.norm(x) for x in D.elements))
    assert E.level() == D.level


@given(st.sampled_from(SYMBOLS))
def test_dual_is_an_involution(symbol):
    D = DiscriminantForm.parse(symbol)
    assert D.dual().dual() == D
    assert (D.signature + D.dual().signature) % 8 == 0
    assert D.level % 2 or D.level <= 2 * D.order


@given(st.sampled_from(TRANSITIVE))
def test_transitive_forms_are_anisotropic(D):
    E = ExplicitModule.from_symbol(D.symbol())
    assert E.is_anisotropic()


@given(st.sampled_from([D for D in TRANSITIVE if D.signature % 2]))
def test_character_is_even(D):
    assert D.character()(-1) == 1


@pytest.mark.parametrize("D", SHAPED, ids=lambda D: D.symbol())
def test_local_characters_at_minus_one(D):
    chi = D.character()
    odd = 1
    for p in chi.nontrivial_odd_primes():
        odd *= chi.local_value(p, -1)
    (c2,) = D.p_part(2)
    t = c2.oddity_t if c2.sign == 1 else c2.oddity_t + 4
    expected = 1 if (D.signature - t) % 4 == 0 else -1
    assert chi.local_value(2, -1) == odd == expected


@pytest.mark.parametrize("D", SHAPED, ids=lambda D: D.symbol())
def test_represents_norm_matches_enumeration(D):
    E = ExplicitModule.from_symbol(D.symbol())
    N = D.level
    norms = {x * N for x in norm_census(E)}
    for n in range(N):
        assert D.represents_norm(n) == (n in norms)


@pytest.mark.parametrize("D", SHAPED, ids=lambda D: D.symbol())
def test_local_norm_counts(D):
    E = ExplicitModule.from_symbol(D.symbol())
    for p, part in split_primary(E).items():
        if p == 2:
            continue
        rank = D.p_part(p)[0].rank
        census = norm_census(part)
        for nu in (F(a, p) for a in range(1, p)):
            if rank == 1:
                assert census.get(nu, 0) in (0, 2)
            else:
                assert census[nu] == p + 1
        assert sum(census.values()) == p**rank
