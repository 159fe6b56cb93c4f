"""Weil representations, scalar eps-spaces and Borcherds products at levels 4 and 12."""

from .borcherds import BorcherdsLift, EtaMatch, cm_divisor_orders, eta_quotient_match, lift, weyl_vector
from .discriminant import DiscriminantForm, EpsilonData, JordanComponent, QuadraticCharacter
from .errors import (
    InconsistencyError,
    InsufficientOrderError,
    IntegralityError,
    UnsupportedLevelError,
    WeilformError,
)
from .qseries import FracQSeries, eta, eta_quotient, extract_exponents, product_expand, theta
from .scalar_forms import (
    EpsilonSpaceSpec,
    ReducedBasis,
    build_holomorphic_basis,
    build_weak_basis,
    duality_check,
    eisenstein_G,
    eisenstein_G_epsilon,
    existence,
    hurwitz,
    residue_pairing,
)
from .vvmf import VectorForm, check_S, check_T, phi, psi
from .weil import WeilRep, norm_classes

__all__ = [
    "BorcherdsLift",
    "DiscriminantForm",
    "EpsilonData",
    "EpsilonSpaceSpec",
    "EtaMatch",
    "FracQSeries",
    "InconsistencyError",
    "InsufficientOrderError",
    "IntegralityError",
    "JordanComponent",
    "QuadraticCharacter",
    "ReducedBasis",
    "UnsupportedLevelError",
    "VectorForm",
    "WeilRep",
    "WeilformError",
    "build_holomorphic_basis",
    "build_weak_basis",
    "check_S",
    "check_T",
    "cm_divisor_orders",
    "duality_check",
    "eisenstein_G",
    "eisenstein_G_epsilon",
    "eta",
    "eta_quotient",
    "eta_quotient_match",
    "existence",
    "extract_exponents",
    "hurwitz",
    "lift",
    "norm_classes",
    "phi",
    "product_expand",
    "psi",
    "residue_pairing",
    "theta",
    "weyl_vector",
]
