"""
The witness set S(chi1, chi2, sigma), its preorder and maximal element, and
the (J, x) <-> (s, t) dictionary.
"""
from typing import List, Optional, Tuple

from app.config import get_settings
from app.exceptions import AmbiguityError, BudgetExceeded, InputError
from app.models.schemas import CharacterPair, FieldShape, JXPair, SerreWeight, STPair
from app.services.ground import omega_sum
from app.utils.vectors import Vector, all_masks, box, sub


def check_jx(shape: FieldShape, jx: JXPair) -> None:
    if len(jx.x) != shape.f or jx.J >= 1 << shape.f:
        raise InputError(f"(J, x) does not fit f={shape.f}", "jx")
    if any(not 0 <= v <= shape.e - 1 for v in jx.x):
        raise InputError(f"x={list(jx.x)} must lie in [0, {shape.e - 1}]", "jx")


def all_jx(shape: FieldShape) -> List[JXPair]:
    return [
        JXPair(J=J, x=x)
        for J in all_masks(shape.f)
        for x in box(0, shape.e - 1, shape.f)
    ]


def s_of(jx: JXPair, sigma: SerreWeight) -> Vector:
    r = sigma.r
    return tuple(
        r[i] + jx.x[i] if jx.contains(i) else jx.x[i]
        for i in range(sigma.shape.f)
    )


def t_of(jx: JXPair, sigma: SerreWeight) -> Vector:
    e = sigma.shape.e
    return tuple(d + e - s for d, s in zip(sigma.a_minus_b, s_of(jx, sigma)))


def in_sset(pair: CharacterPair, sigma: SerreWeight, jx: JXPair) -> bool:
    """Both diagonal inertia congruences, checked at the base embedding"""
    shape, e = pair.shape, pair.e
    a, b, x = sigma.a, sigma.b, jx.x
    u = [a[i] + 1 + x[i] if jx.contains(i) else b[i] + x[i] for i in range(shape.f)]
    v = [b[i] + e - 1 - x[i] if jx.contains(i) else a[i] + e - x[i] for i in range(shape.f)]
    chi1_class = omega_sum(shape, pair.n, 0) + pair.n2_class
    return (
        (omega_sum(shape, u, 0) - chi1_class) % shape.q == 0
        and (omega_sum(shape, v, 0) - pair.n2_class) % shape.q == 0
    )


def enumerate_sset(pair: CharacterPair, sigma: SerreWeight, budget: int = None) -> List[JXPair]:
    budget = budget or get_settings().sset_budget
    required = (2 ** pair.f) * (pair.e ** pair.f)
    if required > budget:
        raise BudgetExceeded("witness scan", required, budget)
    return [jx for jx in all_jx(pair.shape) if in_sset(pair, sigma, jx)]


def order_leq(jx: JXPair, other: JXPair, sigma: SerreWeight) -> bool:
    """(J,x) <= (J',x') iff every Omega of s(J',x') - s(J,x) is in q * Z_{>=0}"""
    shape = sigma.shape
    diff = sub(s_of(other, sigma), s_of(jx, sigma))
    for i in range(shape.f):
        value = omega_sum(shape, diff, i)
        if value < 0 or value % shape.q != 0:
            return False
    return True


def preorder_failures(witnesses: List[JXPair], sigma: SerreWeight) -> List[Tuple[JXPair, ...]]:
    """Witnesses breaking reflexivity (u,) or transitivity (u, v, w) of order_leq"""
    failures = [(u,) for u in witnesses if not order_leq(u, u, sigma)]
    leq = {(u, v): order_leq(u, v, sigma) for u in witnesses for v in witnesses}
    for u in witnesses:
        for v in witnesses:
            if not leq[u, v]:
                continue
            failures.extend(
                (u, v, w) for w in witnesses if leq[v, w] and not leq[u, w]
            )
    return failures


def maximal_element(pair: CharacterPair, sigma: SerreWeight) -> Optional[JXPair]:
    """
    The unique maximum of S, None when S is empty.
    Raises AmbiguityError carrying the candidates otherwise.
    """
    witnesses = enumerate_sset(pair, sigma)
    if not witnesses:
        return None
    maxima = [
        m for m in witnesses
        if all(order_leq(jx, m, sigma) for jx in witnesses)
    ]
    if len(maxima) != 1:
        raise AmbiguityError(
            f"{sigma.label}: {len(maxima)} maximal witnesses among {len(witnesses)}",
            maxima or witnesses,
        )
    return maxima[0]


def symmetric_ties(pair: CharacterPair, sigma: SerreWeight) -> List[tuple]:
    """Distinct witnesses related both ways by the preorder"""
    witnesses = enumerate_sset(pair, sigma)
    return [
        (u, v)
        for i, u in enumerate(witnesses)
        for v in witnesses[i + 1:]
        if order_leq(u, v, sigma) and order_leq(v, u, sigma)
    ]


def jx_to_st(jx: JXPair, sigma: SerreWeight) -> STPair:
    return STPair(s=s_of(jx, sigma), t=t_of(jx, sigma))


def st_to_jx(st: STPair, sigma: SerreWeight) -> JXPair:
    shape = sigma.shape
    r = sigma.r
    J = 0
    x = []
    for i in range(shape.f):
        if st.t[i] <= shape.e - 1:
            J |= 1 << i
            x.append(st.s[i] - r[i])
        else:
            x.append(st.s[i])
    if any(not 0 <= v <= shape.e - 1 for v in x):
        raise InputError(f"(s, t) gives x={x} outside [0, {shape.e - 1}]", "st")
    return JXPair(J=J, x=tuple(x))


def j_equals_t_less_r(pair: CharacterPair, sigma: SerreWeight, jx: JXPair) -> bool:
    t = t_of(jx, sigma)
    r = sigma.r
    return all(jx.contains(i) == (t[i] < r[i]) for i in range(pair.f))
