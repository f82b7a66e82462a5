"""
Signed congruence sum_i (-1)^{i not in J} r_i p^i = Omega_0(c) mod q with
r in [1, p]^f: the step function delta_J, the recursive solver r(J, c), its
specialization r(J, x), a closed form and the exhaustive oracle.
"""
from typing import FrozenSet, List, Optional, Sequence

from app.config import get_settings
from app.exceptions import BudgetExceeded, InputError, PreconditionError
from app.models.schemas import CharacterPair, FieldShape, JXPair
from app.services.ground import omega_sum
from app.utils.vectors import Vector, base_p_digits, box, constant, full_mask, in_mask


def delta_J(shape: FieldShape, y: Sequence[int], i: int, J: int) -> Vector:
    """
    One carry step at embedding i. For f = 1 the two updates hit the same
    entry and are applied in order.
    """
    p, f = shape.p, shape.f
    i %= f
    y = list(y)
    if 1 <= y[i] <= p:
        return tuple(y)
    y[i] += p if y[i] <= 0 else -p
    succ = (i + 1) % f
    y[succ] += 1 if in_mask(J, succ) else -1
    return tuple(y)


def _check_c(shape: FieldShape, c: Sequence[int]) -> None:
    if len(c) != shape.f:
        raise InputError(f"c has length {len(c)}, expected f={shape.f}", "c")
    for i, v in enumerate(c):
        if not 1 <= v <= shape.p - 1:
            raise PreconditionError(f"c_{i}={v} is outside [1, {shape.p - 1}]")


def initial_vector(shape: FieldShape, J: int, c: Sequence[int]) -> Vector:
    p, f = shape.p, shape.f
    y0 = []
    for i in range(f):
        prev_in = in_mask(J, (i - 1) % f)
        if in_mask(J, i):
            y0.append(c[i] if prev_in else c[i] + 1)
        else:
            y0.append(p - c[i] if prev_in else p - 1 - c[i])
    return tuple(y0)


def admissible_tau0(shape: FieldShape, J: int, c: Sequence[int]) -> List[int]:
    """Indices where y_0 vanishes"""
    return [i for i, v in enumerate(initial_vector(shape, J, c)) if v == 0]


def r_of(shape: FieldShape, J: int, c: Sequence[int], tau0: Optional[int] = None) -> Vector:
    _check_c(shape, c)
    y = initial_vector(shape, J, c)
    if all(v > 0 for v in y):
        return y
    zeros = [i for i, v in enumerate(y) if v == 0]
    if tau0 is None:
        tau0 = zeros[0]
    elif tau0 not in zeros:
        raise InputError(f"tau0={tau0} is not a zero of y0={list(y)}", "tau0")
    for kappa in range(1, shape.f + 1):
        y = delta_J(shape, y, tau0 + kappa - 1, J)
    return y


def c_of_jx(pair: CharacterPair, jx: JXPair) -> Vector:
    return tuple(n + pair.e - 1 - 2 * x for n, x in zip(pair.n, jx.x))


def r_of_jx(pair: CharacterPair, jx: JXPair) -> Vector:
    return r_of(pair.shape, jx.J, c_of_jx(pair, jx))


def _is_solution(shape: FieldShape, J: int, target: int, r: Sequence[int]) -> bool:
    signed = [v if in_mask(J, i) else -v for i, v in enumerate(r)]
    return (omega_sum(shape, signed, 0) - target) % shape.q == 0


def brute_solutions(shape: FieldShape, J: int, c: Sequence[int], budget: int = None) -> FrozenSet[Vector]:
    """Exhaustive scan of [1, p]^f"""
    budget = budget or get_settings().congruence_budget
    required = shape.p ** shape.f
    if required > budget:
        raise BudgetExceeded("congruence scan", required, budget)
    target = omega_sum(shape, c, 0)
    return frozenset(r for r in box(1, shape.p, shape.f) if _is_solution(shape, J, target, r))


def solve_signed_congruence(shape: FieldShape, J: int, c: Sequence[int]) -> FrozenSet[Vector]:
    """
    Closed form of brute_solutions. With digits r_i - 1 on J and p - r_i off
    J, the signed sum becomes D + K for a digit number D in [0, q].
    """
    p, f, q = shape.p, shape.f, shape.q
    K = sum(p ** i if in_mask(J, i) else -(p ** (i + 1)) for i in range(f))
    d0 = (omega_sum(shape, c, 0) - K) % q
    numbers = [d0, q] if d0 == 0 else [d0]
    solutions = set()
    for number in numbers:
        digits = base_p_digits(number, p, f)
        solutions.add(tuple(
            digits[i] + 1 if in_mask(J, i) else p - digits[i]
            for i in range(f)
        ))
    return frozenset(solutions)


def complementary_pair(shape: FieldShape, J: int) -> FrozenSet[Vector]:
    """p on J and 1 off J, together with the swap"""
    f, p = shape.f, shape.p
    on = tuple(p if in_mask(J, i) else 1 for i in range(f))
    off = tuple(1 if in_mask(J, i) else p for i in range(f))
    return frozenset({on, off})


def exceptional_configuration(pair: CharacterPair, jx: JXPair) -> Optional[str]:
    """
    "full" for J full, n = e, x = e-1; "empty" for J empty, n = p-1-e,
    x = 0; None otherwise.
    """
    e, p, f = pair.e, pair.p, pair.f
    if jx.J == full_mask(f) and pair.n == constant(e, f) and jx.x == constant(e - 1, f):
        return "full"
    if jx.J == 0 and pair.n == constant(p - 1 - e, f) and jx.x == constant(0, f):
        return "empty"
    return None
