import pytest

from app.models.schemas import FieldShape
from app.services.ground import make_pair
from app.services.serre_weights import parse_weight


@pytest.fixture
def c1():
    """p=5, f=2, e=1, n=(4,2), n2=0"""
    return make_pair(FieldShape(p=5, f=2, e=1), (4, 2), (0, 0))


@pytest.fixture
def c2():
    """p=5, f=1, e=1, n=(2)"""
    return make_pair(FieldShape(p=5, f=1, e=1), (2,), (0,))


@pytest.fixture
def c3():
    """p=5, f=1, e=2, n=(2): chi is both cyclotomic and inverse cyclotomic"""
    return make_pair(
        FieldShape(p=5, f=1, e=2), (2,), (0,),
        chi_cyclotomic=True, chi_inv_cyclotomic=True,
    )


@pytest.fixture
def c3_unramified(c3):
    return c3.model_copy(update={"chi2_unramified": True})


@pytest.fixture
def c4():
    """p=5, f=1, e=1, n=(1), chi cyclotomic, chi2 unramified"""
    return make_pair(
        FieldShape(p=5, f=1, e=1), (1,), (0,),
        chi_cyclotomic=True, chi2_unramified=True,
    )


def weight(pair, label):
    return parse_weight(pair.shape, label)


def labels(weights):
    return sorted(s.label for s in weights)
