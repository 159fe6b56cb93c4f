import os
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

from weilform.discriminant import DiscriminantForm  # noqa: E402
from weilform.scalar_forms import EpsilonSpaceSpec, build_weak_basis  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def D12():
    return DiscriminantForm.from_level(12)


@pytest.fixture(scope="session")
def D4():
    return DiscriminantForm.from_level(4)


@pytest.fixture(scope="session")
def bases():
    """Weight-1/2 and dual weight-3/2 bases at N = 4 and 12, |m| <= 50, O(q^200)."""
    out = {}
    for N in (4, 12):
        D = DiscriminantForm.from_level(N)
        out[N] = (
            build_weak_basis(EpsilonSpaceSpec(D, Fraction(1, 2)), -50, 200),
            build_weak_basis(EpsilonSpaceSpec(D.dual(), Fraction(3, 2)), -50, 200),
        )
    return out


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
