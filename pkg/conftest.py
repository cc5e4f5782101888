"""
Shared fixtures: rings over ZZ/32003 and QQ and the bundled ambient schemes
"""
import pytest

from biliaison.catalog import projective_space, smooth_quadric, three_axes
from biliaison.groebner import Ideal


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running worked examples")


@pytest.fixture
def P3():
    return projective_space(3)


@pytest.fixture
def P2():
    return projective_space(2)


@pytest.fixture
def P3_QQ():
    return projective_space(3, field_kind="rational")


@pytest.fixture
def ideal(P3):
    def make(*gens, ring=None):
        return Ideal(ring or P3, list(gens))

    return make


@pytest.fixture
def twisted_cubic(P3):
    return Ideal(P3, ["x*z - y^2", "y*w - z^2", "x*w - y*z"])


@pytest.fixture
def quadric(P3):
    return smooth_quadric(P3)


@pytest.fixture
def axes(P3):
    return three_axes(P3)
