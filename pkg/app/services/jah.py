"""
Basis indices W of H^1, the embedding attached to each index, the m-grid,
and the index set J^AH of a weight: computed directly from the maximal
witness, and by the dimension-vector rule.
"""
from functools import lru_cache
from typing import FrozenSet, List, Optional, Tuple

from app.exceptions import InputError, InvariantFailure, NotAWeightError, PreconditionError
from app.models.schemas import (
    TR,
    UN,
    BasisIndex,
    CharacterPair,
    DimensionVector,
    JahData,
    JXPair,
    SerreWeight,
)
from app.services.ground import (
    is_weakly_generic,
    omega_sum,
    p_adic_valuation,
    period,
)
from app.services.sset import maximal_element, s_of, t_of
from app.utils.vectors import sub


@lru_cache(maxsize=4096)
def w_prime_sets(pair: CharacterPair) -> Tuple[Tuple[Tuple[int, ...], ...], Tuple[BasisIndex, ...]]:
    """
    W'_j for j < e by range scan, and W = W' x [0, f'').
    The bounds j*p*q/(p-1) < m < (j+1)*p*q/(p-1) are compared exactly.
    """
    shape = pair.shape
    p, q = shape.p, shape.q
    f_prime, f_second = period(pair.n)
    residues = {omega_sum(shape, pair.n, i) % q for i in range(shape.f)}
    per_j = []
    for j in range(shape.e):
        low, high = j * p * shape.unit, (j + 1) * p * shape.unit
        members = tuple(
            m for m in range(low + 1, high)
            if m % p != 0 and m % q in residues
        )
        if len(members) != f_prime:
            raise InvariantFailure(
                f"|W'_{j}| = {len(members)} but f' = {f_prime} for n={list(pair.n)}"
            )
        per_j.append(members)
    basis = tuple(
        BasisIndex.ca(m, k)
        for members in per_j
        for m in members
        for k in range(f_second)
    )
    return tuple(per_j), basis


def w_prime(pair: CharacterPair) -> FrozenSet[int]:
    per_j, _ = w_prime_sets(pair)
    return frozenset(m for members in per_j for m in members)


def basis(pair: CharacterPair) -> Tuple[BasisIndex, ...]:
    """W together with the markers that are legal for the pair"""
    _, indices = w_prime_sets(pair)
    markers = ((UN,) if pair.chi_trivial else ()) + ((TR,) if pair.chi_cyclotomic else ())
    return indices + markers


def m_grid(pair: CharacterPair) -> Tuple[Tuple[int, ...], ...]:
    """m_{i,j} = Omega_i(n) + j*q, indexed [i][j]"""
    shape = pair.shape
    return tuple(
        tuple(omega_sum(shape, pair.n, i) + j * shape.q for j in range(shape.e))
        for i in range(shape.f)
    )


def m_grid_matches(pair: CharacterPair) -> List[int]:
    """The j for which W'_j differs from {m_{i,j} : i}"""
    per_j, _ = w_prime_sets(pair)
    grid = m_grid(pair)
    return [
        j for j in range(pair.e)
        if set(per_j[j]) != {grid[i][j] for i in range(pair.f)}
    ]


def tau_of_m(pair: CharacterPair, m: int) -> int:
    if m not in w_prime(pair):
        raise InputError(f"m={m} is not in W'", "class")
    f_prime, _ = period(pair.n)
    for i in range(f_prime):
        if (m - omega_sum(pair.shape, pair.n, i)) % pair.q == 0:
            return i
    raise InvariantFailure(f"m={m} in W' matches no Omega_i(n)")


def tau_alpha(pair: CharacterPair, alpha: BasisIndex) -> int:
    f_prime, _ = period(pair.n)
    return (tau_of_m(pair, alpha.m) - alpha.k * f_prime) % pair.f


def index_for(pair: CharacterPair, i: int, j: int) -> BasisIndex:
    """The index alpha with m = m_{i,j} and tau_alpha = i"""
    m = m_grid(pair)[i][j]
    if m not in w_prime(pair):
        raise PreconditionError(f"m_({i},{j})={m} is not in W'")
    f_prime, _ = period(pair.n)
    k = ((tau_of_m(pair, m) - i) % pair.f) // f_prime
    return BasisIndex.ca(m, k)


def embedding_coordinates(pair: CharacterPair, alpha: BasisIndex) -> Tuple[int, int]:
    """(tau_alpha, j) with m = m_{tau_alpha, j}"""
    i = tau_alpha(pair, alpha)
    j, rest = divmod(alpha.m - omega_sum(pair.shape, pair.n, i), pair.q)
    if rest or not 0 <= j < pair.e:
        raise PreconditionError(f"{alpha.token()} is not on the m-grid")
    return i, j


def _require_maximal(pair: CharacterPair, sigma: SerreWeight) -> JXPair:
    jx = maximal_element(pair, sigma)
    if jx is None:
        raise NotAWeightError(f"{sigma.label} has an empty witness set")
    return jx


def jah_data(pair: CharacterPair, sigma: SerreWeight) -> JahData:
    shape = pair.shape
    jx = _require_maximal(pair, sigma)
    s, t, r = s_of(jx, sigma), t_of(jx, sigma), sigma.r
    diff = sub(s, t)
    xi = tuple(shape.q * s[i] + omega_sum(shape, diff, i) for i in range(shape.f))
    intervals = []
    for i in range(shape.f):
        if jx.contains(i):
            members = {t[i]} | set(range(r[i], s[i]))
        else:
            members = set(range(0, s[i]))
        intervals.append(tuple(sorted(members)))
    includes_tr = (
        pair.chi_cyclotomic
        and pair.chi2_unramified
        and all(v == shape.p for v in r)
    )
    return JahData(
        jx=jx, s=s, t=t, r=r, xi=xi,
        intervals=tuple(intervals), includes_tr=includes_tr,
    )


def _markers(pair: CharacterPair, data: JahData) -> FrozenSet[BasisIndex]:
    markers = set()
    if pair.chi_trivial:
        markers.add(UN)
    if data.includes_tr:
        markers.add(TR)
    return frozenset(markers)


def direct_hit(pair: CharacterPair, xi: int, d: int) -> Optional[Tuple[int, int]]:
    """(m, j) with p^j m = xi - d*q and p not dividing m, if the right side is positive"""
    value = xi - d * pair.q
    if value <= 0:
        return None
    j = p_adic_valuation(pair.shape, value)
    return value // pair.p ** j, j


def jah_direct(pair: CharacterPair, sigma: SerreWeight, data: JahData = None) -> FrozenSet[BasisIndex]:
    data = data or jah_data(pair, sigma)
    _, indices = w_prime_sets(pair)
    by_m = {}
    for alpha in indices:
        by_m.setdefault(alpha.m, []).append(alpha)
    found = set()
    for i in range(pair.f):
        for d in data.intervals[i]:
            hit = direct_hit(pair, data.xi[i], d)
            if hit is None or hit[0] not in by_m:
                continue
            m, j = hit
            target = (i + j) % pair.f
            found.update(a for a in by_m[m] if tau_alpha(pair, a) == target)
    return frozenset(found) | _markers(pair, data)


def dimension_vector(pair: CharacterPair, sigma: SerreWeight) -> DimensionVector:
    jx = _require_maximal(pair, sigma)
    f = pair.f
    return DimensionVector(ell=tuple(
        jx.x[i] + (1 if jx.contains((i - 1) % f) else 0) for i in range(f)
    ))


def is_cyclotomic_exceptional(pair: CharacterPair, sigma: SerreWeight, data: JahData) -> bool:
    """r = p, n = e and t = 0 at every embedding"""
    return all(
        data.r[i] == pair.p and pair.n[i] == pair.e and data.t[i] == 0
        for i in range(pair.f)
    )


def jah_fast(pair: CharacterPair, sigma: SerreWeight) -> FrozenSet[BasisIndex]:
    if not is_weakly_generic(pair.shape, pair.n):
        raise PreconditionError(f"n={list(pair.n)} is not weakly generic for e={pair.e}")
    data = jah_data(pair, sigma)
    if is_cyclotomic_exceptional(pair, sigma, data):
        _, indices = w_prime_sets(pair)
        return frozenset(indices) | _markers(pair, data)
    ell = dimension_vector(pair, sigma).ell
    found = {
        index_for(pair, i, j)
        for i in range(pair.f)
        for j in range(ell[i])
    }
    return frozenset(found) | _markers(pair, data)
