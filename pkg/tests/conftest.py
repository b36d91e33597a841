"""Shared fixtures for the test suite."""

import pytest

from weyl_eulerian.algebra import WeylElement, euler_operator
from weyl_eulerian.models import CechModel, PolynomialModel
from weyl_eulerian.parse import parse_element


@pytest.fixture
def P():
    """Parser shortcut: ``P("x1*d1", 2)``."""
    return parse_element


@pytest.fixture
def x1():
    return WeylElement.x(1, 1)


@pytest.fixture
def d1():
    return WeylElement.d(1, 1)


@pytest.fixture(params=[1, 2, 3])
def n(request):
    return request.param


@pytest.fixture
def E(n):
    return euler_operator(n)


@pytest.fixture
def R1():
    return PolynomialModel(1)


@pytest.fixture
def R2():
    return PolynomialModel(2)


@pytest.fixture
def hull1():
    """``H^1_(x1)(K[x1])``, spanned by ``x1^-k`` for ``k >= 1``."""
    return CechModel(1, [(1,)], 1)


@pytest.fixture
def hull2():
    """``H^2_(x1, x2)(K[x1, x2])``."""
    return CechModel(2, [(1,), (2,)], 2)
