"""
Field shapes, Omega sums, valuations, normalization of inertia exponents,
periods and genericity.

Embedding index i stands for tau_0 o phi^i; all index arithmetic is mod f.
"""
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from app.exceptions import InputError, InvariantFailure
from app.models.schemas import CharacterPair, FieldShape, InertiaCharacter
from app.utils.vectors import Vector, base_p_digits, box


def omega_sum(shape: FieldShape, a: Sequence[int], i: int) -> int:
    """Sum over j of p^j * a_{(i+j) mod f}, exact"""
    f = shape.f
    if len(a) != f:
        raise InputError(f"vector of length {len(a)} given where f={f}")
    p = shape.p
    return sum(p ** j * a[(i + j) % f] for j in range(f))


def class_of(shape: FieldShape, a: Sequence[int]) -> int:
    """Residue mod q of the Omega sum at the base embedding"""
    return omega_sum(shape, a, 0) % shape.q


def p_adic_valuation(shape: FieldShape, m: int) -> int:
    if m == 0:
        raise InputError("valuation of 0 is undefined")
    p = shape.p
    m = abs(m)
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@lru_cache(maxsize=None)
def _normalization_table(shape: FieldShape) -> Dict[int, Vector]:
    table: Dict[int, List[Vector]] = {}
    p = shape.p
    for n in box(1, p, shape.f):
        if all(v == p for v in n):
            continue
        table.setdefault(class_of(shape, n), []).append(n)
    unique = {}
    for cls, vectors in table.items():
        if len(vectors) != 1:
            raise InvariantFailure(
                f"class {cls} mod {shape.q} has {len(vectors)} normalized vectors: {vectors}"
            )
        unique[cls] = vectors[0]
    if len(unique) != shape.q:
        raise InvariantFailure(f"normalization covers {len(unique)} of {shape.q} classes")
    return unique


def normalize_inertia_exponents(shape: FieldShape, cls: int) -> InertiaCharacter:
    """The unique n in [1,p]^f, some n_i < p, with Omega_0(n) = cls mod q"""
    n = _normalization_table(shape)[cls % shape.q]
    return InertiaCharacter(shape=shape, n=n)


def rotate(v: Sequence[int], k: int) -> Vector:
    """Cyclic relabeling: entry i of the result is v_{(i+k) mod f}"""
    f = len(v)
    return tuple(v[(i + k) % f] for i in range(f))


def period(n: Sequence[int]) -> Tuple[int, int]:
    """(f', f''): minimal cyclic period of n and f / f'"""
    f = len(n)
    for shift in range(1, f + 1):
        if f % shift == 0 and rotate(n, shift) == tuple(n):
            return shift, f // shift
    return f, 1


def is_weakly_generic(shape: FieldShape, n: Sequence[int]) -> bool:
    e, p = shape.e, shape.p
    return all(e <= v <= p - e for v in n)


def is_strongly_generic(shape: FieldShape, n: Sequence[int]) -> bool:
    e, p = shape.e, shape.p
    return all(e <= v <= p - 1 - e for v in n)


def is_boundary(shape: FieldShape, n: Sequence[int]) -> bool:
    """
    Cells where the l-rule is only classified empirically: outside weak
    genericity, or e = 1 with some n_i = p - 1.
    """
    if not is_weakly_generic(shape, n):
        return True
    return shape.e == 1 and any(v == shape.p - 1 for v in n)


def inertia_is_cyclotomic(pair: CharacterPair) -> bool:
    return all(v == pair.e for v in pair.n)


def inertia_is_inv_cyclotomic(pair: CharacterPair) -> bool:
    return all(v == pair.p - 1 - pair.e for v in pair.n)


def validate_flags(pair: CharacterPair) -> List[str]:
    """Every caller flag whose inertia-level congruence fails"""
    shape = pair.shape
    q = shape.q
    omega = omega_sum(shape, pair.n, 0)
    cyclotomic = (pair.e * shape.unit) % q
    violations = []
    if pair.chi_trivial and omega % q != 0:
        violations.append(f"chi_trivial: Omega={omega} is not 0 mod {q}")
    if pair.chi_cyclotomic and (omega - cyclotomic) % q != 0:
        violations.append(
            f"chi_cyclotomic: Omega={omega} is not {cyclotomic} mod {q}"
        )
    if pair.chi_inv_cyclotomic and (-omega - cyclotomic) % q != 0:
        violations.append(
            f"chi_inv_cyclotomic: -Omega={-omega} is not {cyclotomic} mod {q}"
        )
    return violations


def make_pair(
    shape: FieldShape,
    n: Sequence[int],
    n2: Sequence[int] = None,
    **flags: bool,
) -> CharacterPair:
    """
    Build a CharacterPair from exponent vectors. n2 may be a full vector of
    length f or a single class; it is reduced mod q.
    """
    if n2 is None:
        n2_class = 0
    elif len(n2) == shape.f:
        n2_class = class_of(shape, n2)
    elif len(n2) == 1:
        n2_class = n2[0] % shape.q
    else:
        raise InputError(f"n2 has length {len(n2)}, expected 1 or f={shape.f}", "n2")
    return CharacterPair(shape=shape, n=tuple(n), n2_class=n2_class, **flags)


def n2_vector(pair: CharacterPair) -> Vector:
    """A representative exponent vector of chi2 (digits of its class)"""
    return base_p_digits(pair.n2_class, pair.p, pair.f)


def normalized_vectors(shape: FieldShape) -> Iterator[Vector]:
    return iter(sorted(_normalization_table(shape).values()))


def rotation_class_representatives(shape: FieldShape) -> List[Vector]:
    """Lexicographically smallest rotation of every normalized n"""
    reps = set()
    for n in normalized_vectors(shape):
        reps.add(min(rotate(n, k) for k in range(shape.f)))
    return sorted(reps)


def consistent_flag_sets(shape: FieldShape, n: Sequence[int], n2_class: int = 0) -> List[CharacterPair]:
    """Every combination of caller flags that passes validate_flags"""
    pairs = []
    for bits in range(16):
        pair = CharacterPair(
            shape=shape,
            n=tuple(n),
            n2_class=n2_class % shape.q,
            chi_trivial=bool(bits & 1),
            chi_cyclotomic=bool(bits & 2),
            chi_inv_cyclotomic=bool(bits & 4),
            chi2_unramified=bool(bits & 8),
        )
        if not validate_flags(pair):
            pairs.append(pair)
    return pairs
