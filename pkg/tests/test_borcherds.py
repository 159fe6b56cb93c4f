from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import golden
from weilform.borcherds import cm_divisor_orders, eta_quotient_match, lift, weyl_vector
from weilform.discriminant import DiscriminantForm
from weilform.errors import InsufficientOrderError, IntegralityError
from weilform.qseries import FracQSeries, eta, eta_quotient, extract_exponents, theta
from weilform.scalar_forms import eisenstein_G_epsilon

D12 = DiscriminantForm.from_level(12)
D4 = DiscriminantForm.from_level(4)
HSTAR = eisenstein_G_epsilon(D12, 20)


@pytest.fixture(scope="module")
def f(bases):
    return bases[12][0].form


def test_weyl_vector_examples(f):
    assert weyl_vector(D12, {0: F(1, 2)}, HSTAR) == F(1, 6)
    assert weyl_vector(D12, {-3: F(1, 2)}, HSTAR) == F(-1, 6)
    assert weyl_vector(D12, {}, HSTAR) == 0
    with pytest.raises(InsufficientOrderError):
        weyl_vector(D12, {-30: F(1)}, HSTAR)


def test_lift_f0(f):
    L = lift(D12, f(0), 14)
    assert (L.weight, L.weyl_rho) == (1, F(1, 6))
    assert all(L.exponents[n] == D12.s_of(n * n) for n in range(1, 14))
    assert L.expansion == (eta(1, 14) * eta(3, 14)).truncate(L.expansion.trunc)
    assert L.eta_match.kind == "exact" and L.eta_match.exponents == {1: 1, 3: 1}


def test_lift_f_minus_3(f):
    L = lift(D12, f(-3), 14)
    assert (L.weight, L.weyl_rho) == (0, F(-1, 6))
    assert tuple(L.exponents[n] for n in (1, 2, 3, 4)) == golden.PSI_F_MINUS_3_EXPONENTS
    assert L.divisors == {-3: 1}


def test_lift_f_minus_3_plus_f0_is_E1(f):
    L = lift(D12, f(-3) + f(0), 13)
    assert (L.weight, L.weyl_rho) == (1, 0)
    assert golden.matches(L.expansion, golden.E1)
    M = lift(D12, f(-3), 13)
    assert M.eta_match.kind == "cofactor" and M.eta_match.exponents == {1: -1, 3: -1}
    assert golden.matches(M.eta_match.cofactor, golden.E1)


def test_lift_of_12_theta_is_delta():
    L = lift(D4, theta(200).scale(12), 14)
    assert L.weight == 12 and L.weyl_rho == 1
    assert L.eta_match.exponents == {1: 24}
    assert L.expansion == (eta(1, 14) ** 24).truncate(L.expansion.trunc)


def test_lift_of_theta_is_eta_squared():
    L = lift(D4, theta(200), 14)
    assert L.weyl_rho == F(1, 12) and set(L.exponents.values()) == {2}
    assert L.eta_match.exponents == {1: 2}


def test_cm_divisor_orders(f):
    assert cm_divisor_orders(D12, f(-3), [-3, -7]) == {-3: 1, -7: 0}
    assert cm_divisor_orders(D12, f(0), [-3, -4, -7]) == {-3: 0, -4: 0, -7: 0}
    with pytest.raises(ValueError):
        cm_divisor_orders(D12, f(0), [5])


def test_lift_is_multiplicative(f):
    a, b = lift(D12, f(-3), 12), lift(D12, f(0), 12)
    ab = lift(D12, f(-3) + f(0), 12)
    assert ab.weyl_rho == a.weyl_rho + b.weyl_rho
    assert all(ab.exponents[n] == a.exponents[n] + b.exponents[n] for n in ab.exponents)
    assert ab.expansion.agrees_with(a.expansion * b.expansion)


@given(st.sampled_from([-11, -8, -3, 0]), st.integers(1, 3))
def test_exponents_are_recovered(bases, m, scale):
    g = bases[12][0].form(m).scale(2 * scale)
    L = lift(D12, g, 12)
    rho, e = extract_exponents(L.expansion)
    assert rho == L.weyl_rho
    assert all(e[n] == L.exponents[n] for n in e)
    assert L.weight == D12.s_of(0) * g.coefficient(0)


def test_integrality_screen(f):
    with pytest.raises(IntegralityError, match="n = 0"):
        lift(D12, f(0).scale(F(1, 2)), 10)


def test_lift_rejects_other_discriminant_forms(f):
    other = DiscriminantForm.from_epsilon(12, {2: 1, 3: -1})
    with pytest.raises(ValueError):
        lift(other, f(0), 10)


def test_lift_needs_enough_coefficients(f):
    with pytest.raises(InsufficientOrderError):
        lift(D12, f(0).truncate(50), 10)


def test_eta_match_on_plain_series():
    s = eta_quotient({1: 2, 2: -1}, 40)
    m = eta_quotient_match(s, [1, 2])
    assert m.kind == "exact" and m.exponents == {1: 2, 2: -1}
    assert eta_quotient_match(FracQSeries({0: 1, 1: 1}, 10), [1]).kind in ("cofactor", "none")
