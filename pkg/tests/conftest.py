import pytest

from homsys.derivedcat import DbObject
from homsys.exactfield import PrimeField
from homsys.quiverrep import d4_quiver, linear_quiver, special_rep
from homsys.thetasys import ThetaSystem, build_injective_system, build_projective_system


@pytest.fixture(scope="session")
def a3():
    return linear_quiver(3)


@pytest.fixture(scope="session")
def a4():
    return linear_quiver(4)


@pytest.fixture(scope="session")
def d4():
    return d4_quiver()


@pytest.fixture(scope="session")
def a3p():
    return linear_quiver(3, PrimeField(101))


def obj(q, kind, v, shift=0):
    return DbObject.from_rep(special_rep(q, kind, v), shift)


def P(q, v, s=0):
    return obj(q, "projective", v, s)


def I(q, v, s=0):
    return obj(q, "injective", v, s)


def S(q, v, s=0):
    return obj(q, "simple", v, s)


def a3_indecomposables(q):
    """All six indecomposables of A3: P1, P2, P3 = S3, I2, I1 = S1, S2."""
    return [P(q, 1), P(q, 2), P(q, 3), I(q, 2), S(q, 1), S(q, 2)]


@pytest.fixture(scope="session")
def simples_system(a3):
    return ThetaSystem([S(a3, 1), S(a3, 2), S(a3, 3)])


@pytest.fixture(scope="session")
def shifted_system(a3):
    """I(2) at shifts 0, 2, 4."""
    return ThetaSystem([I(a3, 2, 0), I(a3, 2, 2), I(a3, 2, 4)])


@pytest.fixture(scope="session")
def simples_data(simples_system):
    return build_projective_system(simples_system)


@pytest.fixture(scope="session")
def simples_inj(simples_system):
    return build_injective_system(simples_system)


@pytest.fixture(scope="session")
def shifted_data(shifted_system):
    return build_projective_system(shifted_system)
