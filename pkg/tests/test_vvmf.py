from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weilform.discriminant import DiscriminantForm
from weilform.qseries import FracQSeries, theta
from weilform.scalar_forms import EpsilonSpaceSpec, build_holomorphic_basis
from weilform.vvmf import (
    VectorForm,
    check_S,
    check_T,
    component_zero_determines,
    default_sample_points,
    is_cuspidal,
    is_holomorphic,
    phi,
    psi,
)

HALF, THREE_HALVES = F(1, 2), F(3, 2)
D12 = DiscriminantForm.from_level(12)
D4 = DiscriminantForm.from_level(4)


def spaces(bases, N):
    """(D, k, basis) for the weight 1/2 basis and its dual."""
    A, B = bases[N]
    return [(A.spec.D, A.spec.k, A), (B.spec.D, B.spec.k, B)]


def test_psi_of_f0(bases):
    f0 = bases[12][0].form(0)
    V = psi(D12, f0, HALF)
    c0 = V.component(0)
    assert c0.coefficient(0) == 1
    assert c0.coefficient(1) == D12.s_of(12) * f0.coefficient(12)
    c1 = V.component(F(1, 12))
    assert c1.coefficient(F(1, 12)) == 1 and c1.coefficient(F(25, 12)) == 1
    assert check_T(V) and component_zero_determines(V)


def test_psi_of_theta_at_level_four():
    th = theta(100)
    V = psi(D4, th, HALF)
    assert set(V.components) == {F(0), F(1, 4)}
    for nu, comp in V.components.items():
        for n in range(100):
            e = F(n, 4)
            if (e - nu).denominator == 1:
                assert comp.coefficient(e) == th.coefficient(n)


def test_psi_of_zero():
    V = psi(D12, FracQSeries.zero(40), HALF)
    assert all(c.is_zero() for c in V.components.values())
    assert check_T(V) and component_zero_determines(V)
    assert phi(V).is_zero()


def test_psi_of_f_minus_3(bases):
    V = psi(D12, bases[12][0].form(-3), HALF)
    c0 = V.component(0)
    assert c0.valuation() == 1 and c0.coefficient(1) == 168
    assert V.component(F(3, 4)).coefficient(F(-1, 4)) == 1


def test_psi_rejects_bad_input(bases):
    with pytest.raises(ValueError):
        psi(D12, FracQSeries({2: 1}, 10), HALF)
    with pytest.raises(ValueError):
        psi(D12, bases[12][0].form(0), THREE_HALVES)


def test_check_T_negative_control(bases):
    V = psi(D12, bases[12][0].form(0), HALF)
    comps = dict(V.components)
    comps[F(1, 3)] = comps[F(1, 3)] + FracQSeries.from_terms({F(1, 12): 1}, comps[F(1, 3)].precision)
    assert not check_T(VectorForm(D12, HALF, comps))


def test_check_S_theta_at_i():
    V = psi(D4, theta(200), HALF)
    assert check_S(V, 200, [1j]) < 1e-8


def test_check_S_f0(bases):
    V = psi(D12, bases[12][0].form(0), HALF)
    assert check_S(V, 200, [(1 + 4j) / 3]) < 1e-6


def test_check_S_negative_control(bases):
    V = psi(D12, bases[12][0].form(0), HALF)
    comps = dict(V.components)
    comps[F(1, 12)] = comps[F(1, 12)].scale(-1)
    assert check_S(VectorForm(D12, HALF, comps), 200, [(1 + 4j) / 3]) > 1e-2


def test_check_S_rejects_low_points(bases):
    V = psi(D12, bases[12][0].form(0), HALF)
    with pytest.raises(ValueError):
        check_S(V, 200, [0.3 + 0.2j])


def test_default_sample_points_are_reproducible():
    pts = default_sample_points()
    assert pts == default_sample_points() and len(pts) == 5
    assert all(p.imag >= 0.5 and (-1 / p).imag >= 0.5 for p in pts)


def test_vector_form_json_roundtrip(bases):
    V = psi(D12, bases[12][0].form(-8), HALF)
    assert VectorForm.from_json(V.to_json()) == V


def test_weight_signature_compatibility():
    with pytest.raises(ValueError):
        VectorForm(D12, THREE_HALVES, {})


@pytest.mark.parametrize("N", [4, 12])
def test_roundtrip_on_all_reduced_forms(bases, N):
    for D, k, basis in spaces(bases, N):
        for m, f in basis.forms.items():
            V = psi(D, f, k)
            assert check_T(V)
            assert phi(V) == f, m


@pytest.mark.parametrize("N", [4, 12])
def test_check_S_on_reduced_forms(bases, N):
    for D, k, basis in spaces(bases, N):
        for m, f in basis.forms.items():
            if m >= -11:
                assert check_S(psi(D, f, k), 200) < 1e-6, m


@given(st.sampled_from([-11, -8, -3, 0]), st.integers(-3, 3), st.integers(-3, 3))
def test_psi_is_linear(bases, m, a, b):
    A = bases[12][0]
    f, g = A.form(m), A.form(0)
    lhs = psi(D12, f.scale(a) + g.scale(b), HALF)
    Vf, Vg = psi(D12, f, HALF), psi(D12, g, HALF)
    for nu in lhs.components:
        assert lhs.component(nu) == Vf.component(nu).scale(a) + Vg.component(nu).scale(b)


@pytest.mark.parametrize("N", [4, 12])
def test_holomorphic_and_cuspidal_preservation(bases, N):
    for D, k, basis in spaces(bases, N):
        spec = EpsilonSpaceSpec(D, k)
        for f in build_holomorphic_basis(spec, 120).forms.values():
            assert is_holomorphic(psi(D, f, k))
        for f in build_holomorphic_basis(spec, 120, cuspidal=True).forms.values():
            assert is_cuspidal(psi(D, f, k))
        for m, f in basis.forms.items():
            V = psi(D, f, k)
            assert is_holomorphic(V) == (m >= 0)
            assert component_zero_determines(V)
