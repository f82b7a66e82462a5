"""
Small helpers for exponent vectors and embedding subsets.

Vectors are plain tuples of Python ints (exact, no overflow). Subsets of the
embeddings 0..f-1 are int bitmasks: bit i set means embedding i is a member.
"""
from itertools import product
from typing import Iterable, Iterator, Sequence, Tuple

Vector = Tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def constant(value: int, length: int) -> Vector:
    return (value,) * length


def in_mask(mask: int, i: int) -> bool:
    return bool((mask >> i) & 1)


def mask_members(mask: int, f: int) -> Vector:
    return tuple(i for i in range(f) if in_mask(mask, i))


def mask_from_members(members: Iterable[int]) -> int:
    mask = 0
    for i in members:
        mask |= 1 << i
    return mask


def full_mask(f: int) -> int:
    return (1 << f) - 1


def all_masks(f: int) -> range:
    return range(1 << f)


def box(low: int, high: int, length: int) -> Iterator[Vector]:
    """Every vector with entries in [low, high], in lexicographic order"""
    return product(range(low, high + 1), repeat=length)


def base_p_digits(value: int, p: int, length: int) -> Vector:
    """Digits of a nonnegative value, least significant first"""
    digits = []
    for _ in range(length):
        value, d = divmod(value, p)
        digits.append(d)
    return tuple(digits)
