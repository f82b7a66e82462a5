"""
Canonical labels, isomorphism and enumeration of Serre weights sigma_{a,b}.
"""
from typing import Iterator, Sequence

from app.config import get_settings
from app.exceptions import BudgetExceeded, InputError
from app.models.schemas import FieldShape, SerreWeight
from app.services.ground import class_of
from app.utils.vectors import add, base_p_digits, box, sub


def _check_a_minus_b(shape: FieldShape, d: Sequence[int]) -> None:
    if len(d) != shape.f:
        raise InputError(f"weight vectors must have length f={shape.f}", "weight")
    if any(not 0 <= v <= shape.p - 1 for v in d):
        raise InputError(f"a-b={list(d)} must lie in [0, {shape.p - 1}]", "weight")


def weight_from_class(shape: FieldShape, a_minus_b: Sequence[int], b_class: int) -> SerreWeight:
    """The canonical weight with the given a-b and b-sum class mod q"""
    _check_a_minus_b(shape, a_minus_b)
    b = base_p_digits(b_class % shape.q, shape.p, shape.f)
    return SerreWeight(shape=shape, a=add(b, a_minus_b), b=b)


def canonicalize(shape: FieldShape, a: Sequence[int], b: Sequence[int]) -> SerreWeight:
    if len(a) != shape.f or len(b) != shape.f:
        raise InputError(f"weight vectors must have length f={shape.f}", "weight")
    return weight_from_class(shape, sub(a, b), class_of(shape, b))


def weights_isomorphic(sigma: SerreWeight, other: SerreWeight) -> bool:
    if sigma.shape != other.shape:
        raise InputError("weights live on different field shapes")
    shape = sigma.shape
    return (
        sigma.a_minus_b == other.a_minus_b
        and class_of(shape, sigma.b) == class_of(shape, other.b)
    )


def weight_count(shape: FieldShape) -> int:
    return (shape.p ** shape.f) * shape.q


def enumerate_weights(shape: FieldShape, budget: int = None) -> Iterator[SerreWeight]:
    """Every isomorphism class exactly once, canonical, by a-b then b-class"""
    budget = budget or get_settings().enumeration_budget
    required = weight_count(shape)
    if required > budget:
        raise BudgetExceeded("weight enumeration", required, budget)
    for d in box(0, shape.p - 1, shape.f):
        for b_class in range(shape.q):
            yield weight_from_class(shape, d, b_class)


def parse_weight(shape: FieldShape, text: str) -> SerreWeight:
    """Read "a0,...,a_{f-1}/b0,...,b_{f-1}" and canonicalize it"""
    try:
        a_text, b_text = text.split("/")
        a = tuple(int(v) for v in a_text.split(","))
        b = tuple(int(v) for v in b_text.split(","))
    except ValueError:
        raise InputError(f"malformed weight {text!r}, expected a0,a1/b0,b1", "weight")
    return canonicalize(shape, a, b)


def format_weight(sigma: SerreWeight) -> str:
    return sigma.label
