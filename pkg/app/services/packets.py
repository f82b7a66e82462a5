"""
Coordinate subspaces L_w, explicit spans L_sigma, the semisimple weight set,
packets P_w, tres ramifiee detection, w^max and the decomposition of the
weight set of an extension class.
"""
import logging
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterable, List, Sequence

from app.config import get_settings
from app.exceptions import InputError, InvariantFailure, PreconditionError
from app.models.schemas import (
    TR,
    UN,
    BasisIndex,
    CharacterPair,
    ExtensionClass,
    JXPair,
    PacketMap,
    SerreWeight,
    WeightSetResult,
)
from app.services.congruence import c_of_jx, r_of_jx, solve_signed_congruence
from app.services.ground import (
    class_of,
    inertia_is_cyclotomic,
    inertia_is_inv_cyclotomic,
    is_weakly_generic,
    n2_vector,
    omega_sum,
)
from app.services.jah import basis, index_for, jah_direct
from app.services.serre_weights import enumerate_weights, weight_count, weight_from_class
from app.services.sset import all_jx, enumerate_sset
from app.utils.vectors import Vector, constant

logger = logging.getLogger(__name__)

PacketIndex = Vector


def _require_weak(pair: CharacterPair) -> None:
    if not is_weakly_generic(pair.shape, pair.n):
        raise PreconditionError(f"n={list(pair.n)} is not weakly generic for e={pair.e}")


def packet_indices(pair: CharacterPair) -> List[PacketIndex]:
    """All w in [0, e]^f, lexicographic"""
    return list(product(range(pair.e + 1), repeat=pair.f))


def delta_w(pair: CharacterPair, w: Sequence[int]) -> int:
    return sum(1 for v in w if v in (0, pair.e))


def l_w_span(pair: CharacterPair, w: Sequence[int]) -> FrozenSet[BasisIndex]:
    _require_weak(pair)
    if len(w) != pair.f or any(not 0 <= v <= pair.e for v in w):
        raise InputError(f"w={list(w)} must lie in [0, {pair.e}]^{pair.f}", "w")
    span = {
        index_for(pair, i, j)
        for i in range(pair.f)
        for j in range(pair.e - w[i])
    }
    if pair.chi_trivial:
        span.add(UN)
    return frozenset(span)


def l_sigma_span(pair: CharacterPair, sigma: SerreWeight) -> FrozenSet[BasisIndex]:
    return jah_direct(pair, sigma)


# ============ Semisimple weight set ============
def sigma_of_jx(pair: CharacterPair, jx: JXPair) -> SerreWeight:
    """
    The weight attached to (J, x): a-b = r(J, x) - 1 and
    b_i = n2_i + x_i - e + 1, minus r_i off J.
    """
    r = r_of_jx(pair, jx)
    n2 = n2_vector(pair)
    b = tuple(
        n2[i] + jx.x[i] - pair.e + 1 - (0 if jx.contains(i) else r[i])
        for i in range(pair.f)
    )
    return weight_from_class(pair.shape, tuple(v - 1 for v in r), class_of(pair.shape, b))


def sigma_of_jx_table(pair: CharacterPair, jx: JXPair) -> SerreWeight:
    """Four-row closed form of sigma_of_jx, valid under strong genericity"""
    p, e, f = pair.p, pair.e, pair.f
    n, n2, x = pair.n, n2_vector(pair), jx.x
    b, d = [], []
    for i in range(f):
        prev_in = jx.contains((i - 1) % f)
        if jx.contains(i):
            b.append(n2[i] + p - e + x[i])
            d.append(n[i] + e - 2 - 2 * x[i] if prev_in else n[i] + e - 1 - 2 * x[i])
        elif prev_in:
            b.append(n2[i] + n[i] - 1 - x[i])
            d.append(p - n[i] - e + 2 * x[i])
        else:
            b.append(n2[i] + n[i] - x[i])
            d.append(p - 1 - n[i] - e + 2 * x[i])
    return weight_from_class(pair.shape, tuple(d), class_of(pair.shape, b))


def exceptional_weights(pair: CharacterPair) -> FrozenSet[SerreWeight]:
    """The extra weights with a-b = p-1 of the two exceptional configurations"""
    shape = pair.shape
    top = constant(pair.p - 1, pair.f)
    weights = set()
    if inertia_is_cyclotomic(pair):
        weights.add(weight_from_class(shape, top, pair.n2_class))
    if inertia_is_inv_cyclotomic(pair):
        weights.add(weight_from_class(shape, top, pair.n2_class - pair.e * shape.unit))
    return frozenset(weights)


def _weights_by_enumeration(pair: CharacterPair) -> FrozenSet[SerreWeight]:
    return frozenset(s for s in enumerate_weights(pair.shape) if enumerate_sset(pair, s))


def _weights_by_solving(pair: CharacterPair) -> FrozenSet[SerreWeight]:
    shape, e = pair.shape, pair.e
    weights = set()
    for jx in all_jx(shape):
        for r in solve_signed_congruence(shape, jx.J, c_of_jx(pair, jx)):
            d = tuple(v - 1 for v in r)
            k = [
                e - 1 - jx.x[i] if jx.contains(i) else d[i] + e - jx.x[i]
                for i in range(pair.f)
            ]
            b_class = pair.n2_class - omega_sum(shape, k, 0)
            weights.add(weight_from_class(shape, d, b_class))
    return frozenset(weights)


def _weights_by_construction(pair: CharacterPair) -> FrozenSet[SerreWeight]:
    _require_weak(pair)
    return frozenset(sigma_of_jx(pair, jx) for jx in all_jx(pair.shape)) | exceptional_weights(pair)


@lru_cache(maxsize=512)
def w_exp_ss(pair: CharacterPair, method: str = "auto") -> FrozenSet[SerreWeight]:
    """
    Weights with a nonempty witness set. "enumerate" scans every weight,
    "solve" runs over witnesses and solves for the weight, "construct"
    uses the explicit formulas, "auto" enumerates when within budget.
    """
    if method == "auto":
        fits = weight_count(pair.shape) <= get_settings().enumeration_budget
        method = "enumerate" if fits else "solve"
    if method == "enumerate":
        return _weights_by_enumeration(pair)
    if method == "solve":
        return _weights_by_solving(pair)
    if method == "construct":
        return _weights_by_construction(pair)
    raise InputError(f"unknown method {method!r}", "method")


# ============ Packets ============
class PacketTable:
    """
    Spans of every weight and every L_w for one pair, computed once.
    """

    def __init__(self, pair: CharacterPair):
        _require_weak(pair)
        self.pair = pair
        self.weights: List[SerreWeight] = sorted(w_exp_ss(pair), key=SerreWeight.sort_key)
        self.spans: Dict[SerreWeight, FrozenSet[BasisIndex]] = {
            sigma: l_sigma_span(pair, sigma) for sigma in self.weights
        }
        self.l_w: Dict[PacketIndex, FrozenSet[BasisIndex]] = {
            w: l_w_span(pair, w) for w in packet_indices(pair)
        }
        by_span = {span: w for w, span in self.l_w.items()}
        if len(by_span) != len(self.l_w):
            raise InvariantFailure("two packet indices share a coordinate subspace")
        self.packets: Dict[PacketIndex, List[SerreWeight]] = {w: [] for w in self.l_w}
        self.unmatched: List[SerreWeight] = []
        for sigma in self.weights:
            w = by_span.get(self.spans[sigma] - {TR})
            if w is None:
                self.unmatched.append(sigma)
            else:
                self.packets[w].append(sigma)

    def tr_sensitive(self) -> List[SerreWeight]:
        return [s for s in self.weights if TR in self.spans[s]]

    def to_packet_map(self) -> PacketMap:
        return PacketMap(
            packets={w: frozenset(ws) for w, ws in self.packets.items()},
            unmatched=frozenset(self.unmatched),
            tr_sensitive=frozenset(self.tr_sensitive()),
        )


@lru_cache(maxsize=256)
def packet_table(pair: CharacterPair) -> PacketTable:
    return PacketTable(pair)


def packet(pair: CharacterPair, w: Sequence[int]) -> FrozenSet[SerreWeight]:
    table = packet_table(pair)
    w = tuple(w)
    if w not in table.packets:
        raise InputError(f"w={list(w)} must lie in [0, {pair.e}]^{pair.f}", "w")
    return frozenset(table.packets[w])


def all_packets(pair: CharacterPair) -> PacketMap:
    return packet_table(pair).to_packet_map()


def tr_sensitive(pair: CharacterPair) -> FrozenSet[SerreWeight]:
    return frozenset(packet_table(pair).tr_sensitive())


def expected_packet_size(pair: CharacterPair, w: Sequence[int]) -> int:
    """2^(f - delta_w), or 2 under the cyclotomic clauses"""
    size = 2 ** (pair.f - delta_w(pair, w))
    if inertia_is_cyclotomic(pair) and all(v == 0 for v in w):
        return 2
    if inertia_is_inv_cyclotomic(pair) and all(v == pair.e for v in w):
        return 2
    return size


def expected_census(pair: CharacterPair) -> int:
    base = (pair.e ** pair.f) * (2 ** pair.f)
    return base + int(inertia_is_cyclotomic(pair)) + int(inertia_is_inv_cyclotomic(pair))


# ============ Extension classes ============
def make_class(pair: CharacterPair, support: Iterable[BasisIndex]) -> ExtensionClass:
    cls = ExtensionClass(support=frozenset(support))
    validate_class(pair, cls)
    return cls


def validate_class(pair: CharacterPair, cls: ExtensionClass) -> None:
    illegal = cls.support - set(basis(pair))
    if illegal:
        tokens = sorted(a.token() for a in illegal)
        raise InputError(f"class support has illegal coordinates {tokens}", "class")


def is_tres_ramifiee(pair: CharacterPair, cls: ExtensionClass) -> bool:
    validate_class(pair, cls)
    return TR in cls.support


def admissible_indices(pair: CharacterPair, cls: ExtensionClass) -> List[PacketIndex]:
    """Every w whose L_w contains the class"""
    table = packet_table(pair)
    return [w for w, span in table.l_w.items() if cls.support <= span]


def w_max(pair: CharacterPair, cls: ExtensionClass) -> PacketIndex:
    if is_tres_ramifiee(pair, cls):
        raise PreconditionError("class is tres ramifiee: its weight set is a single weight")
    admissible = admissible_indices(pair, cls)
    top = tuple(max(w[i] for w in admissible) for i in range(pair.f))
    if top not in admissible:
        raise InvariantFailure(f"componentwise maximum {list(top)} does not contain the class")
    return top


def direct_weight_set(pair: CharacterPair, cls: ExtensionClass) -> FrozenSet[SerreWeight]:
    table = packet_table(pair)
    return frozenset(s for s in table.weights if cls.support <= table.spans[s])


def tres_ramifiee_weight(pair: CharacterPair) -> SerreWeight:
    return weight_from_class(pair.shape, constant(pair.p - 1, pair.f), pair.n2_class)


def weight_set(pair: CharacterPair, cls: ExtensionClass) -> WeightSetResult:
    """
    Packets below w^max, cross-checked against span membership. A tres
    ramifiee class has the single weight with a-b = p-1 and b = n2.
    """
    direct = direct_weight_set(pair, cls)
    if is_tres_ramifiee(pair, cls):
        weights = frozenset({tres_ramifiee_weight(pair)})
        agrees = not pair.chi2_unramified or weights <= direct
        return WeightSetResult(weights=weights, tres_ramifiee=True, direct=direct, agrees=agrees)
    top = w_max(pair, cls)
    table = packet_table(pair)
    union = set()
    for w, members in table.packets.items():
        if all(w[i] <= top[i] for i in range(pair.f)):
            union.update(members)
    weights = frozenset(union)
    if weights != direct:
        logger.debug("decomposition mismatch for %s: %d vs %d", cls.tokens(), len(weights), len(direct))
    return WeightSetResult(
        weights=weights, tres_ramifiee=False, w_max=top, direct=direct, agrees=weights == direct
    )
