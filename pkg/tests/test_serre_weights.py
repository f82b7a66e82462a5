import pytest

from app.exceptions import BudgetExceeded, InputError
from app.models.schemas import FieldShape, SerreWeight
from app.services.serre_weights import (
    canonicalize,
    enumerate_weights,
    format_weight,
    parse_weight,
    weight_count,
    weight_from_class,
    weights_isomorphic,
)

F2 = FieldShape(p=5, f=2, e=1)


def test_canonical_b_is_digit_vector():
    sigma = canonicalize(F2, (9, 1), (5, 0))
    assert sigma.b == (0, 1)
    assert sigma.a == (4, 2)


def test_all_p_minus_one_b_normalizes_to_zero():
    sigma = canonicalize(F2, (4, 4), (4, 4))
    assert sigma.b == (0, 0)
    assert sigma.a == (0, 0)


@pytest.mark.parametrize("label, a, b", [
    ("3,1/0,0", (3, 1), (0, 0)),
    ("8,3/4,1", (8, 3), (4, 1)),
])
def test_parse_weight(label, a, b):
    sigma = parse_weight(F2, label)
    assert (sigma.a, sigma.b) == (a, b)
    assert format_weight(sigma) == label


@pytest.mark.parametrize("text", ["3,1", "3,x/0,0", "3/0", "9,1/0,0"])
def test_parse_weight_rejects(text):
    with pytest.raises(InputError):
        parse_weight(F2, text)


def test_isomorphism_ignores_representative():
    sigma = SerreWeight(shape=F2, a=(3, 1), b=(0, 0))
    other = weight_from_class(F2, (3, 1), 24)
    assert weights_isomorphic(sigma, other)
    assert not weights_isomorphic(sigma, weight_from_class(F2, (3, 1), 1))


def test_isomorphism_across_shapes_is_an_error():
    sigma = weight_from_class(F2, (0, 0), 0)
    with pytest.raises(InputError):
        weights_isomorphic(sigma, weight_from_class(FieldShape(p=5, f=1, e=1), (0,), 0))


def test_enumeration_is_complete_and_distinct():
    shape = FieldShape(p=3, f=2, e=1)
    weights = list(enumerate_weights(shape))
    assert len(weights) == weight_count(shape) == 9 * 8
    assert len(set(weights)) == len(weights)


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded) as info:
        list(enumerate_weights(FieldShape(p=13, f=3, e=1), budget=1000))
    assert info.value.required == 13 ** 3 * (13 ** 3 - 1)
