"""Shared fixtures. The q=3 field and orbit model are expensive enough to
build once per session; everything downstream treats them as immutable."""

import pytest

from twoint.field import build_field
from twoint.geometry import build_orbits, build_quotient_matrix


@pytest.fixture(scope="session")
def f3():
    return build_field(3)


@pytest.fixture(scope="session")
def f4():
    return build_field(4)


@pytest.fixture(scope="session")
def model3(f3):
    return build_orbits(f3)


@pytest.fixture(scope="session")
def qmatrix3(model3):
    return build_quotient_matrix(model3)
