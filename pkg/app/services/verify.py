"""
Check suites that machine-check the structural statements about weight sets
on a single character pair. Each check returns a list of Findings; the
sweep orchestrator in app.services.sweep runs them over grids of pairs.
"""
from itertools import product
from typing import Callable, Dict, List, Optional

import numpy as np

from app.config import get_settings
from app.exceptions import AmbiguityError, InputError
from app.models.schemas import BasisIndex, CharacterPair, ExtensionClass, Finding, SerreWeight
from app.services.congruence import (
    admissible_tau0,
    brute_solutions,
    c_of_jx,
    complementary_pair,
    exceptional_configuration,
    r_of,
    r_of_jx,
    solve_signed_congruence,
)
from app.services.ground import (
    inertia_is_cyclotomic,
    inertia_is_inv_cyclotomic,
    is_boundary,
    is_strongly_generic,
    is_weakly_generic,
    omega_sum,
    n2_vector,
    p_adic_valuation,
    period,
    rotate,
)
from app.services.jah import (
    basis,
    embedding_coordinates,
    index_for,
    is_cyclotomic_exceptional,
    jah_data,
    jah_direct,
    m_grid,
    m_grid_matches,
    w_prime,
    w_prime_sets,
)
from app.services.packets import (
    admissible_indices,
    expected_census,
    expected_packet_size,
    exceptional_weights,
    packet_table,
    sigma_of_jx,
    sigma_of_jx_table,
    tres_ramifiee_weight,
    w_exp_ss,
    weight_set,
)
from app.services.serre_weights import weight_count
from app.services.sset import (
    all_jx,
    enumerate_sset,
    j_equals_t_less_r,
    jx_to_st,
    maximal_element,
    preorder_failures,
    st_to_jx,
    symmetric_ties,
)
from app.utils.vectors import constant


# ============ Finding helpers ============
def _input(pair: CharacterPair, **extra) -> Dict:
    data = {
        "p": pair.p,
        "f": pair.f,
        "e": pair.e,
        "n": list(pair.n),
        "n2_class": pair.n2_class,
        "flags": list(pair.flags()),
    }
    data.update({k: v for k, v in extra.items() if v is not None})
    return data


def _finding(suite: str, pair: CharacterPair, expected: str, observed: str,
             severity: str, **extra) -> Finding:
    return Finding(
        suite=suite,
        input=_input(pair, **extra),
        expected=expected,
        observed=observed,
        severity=severity,
    )


def _weak_severity(pair: CharacterPair) -> str:
    return "violation" if is_weakly_generic(pair.shape, pair.n) else "boundary-note"


def solution_pair_severity(pair: CharacterPair) -> str:
    """Two solutions off the exceptional configurations are only expected at p = 2 or on boundary cells"""
    if pair.p == 2 or is_boundary(pair.shape, pair.n):
        return "boundary-note"
    return "violation"


def _tokens(indices) -> List[str]:
    return [a.token() for a in sorted(indices, key=BasisIndex.sort_key)]


def _maximal_witnesses(pair: CharacterPair):
    """(sigma, maximal jx) for every weight whose maximum is unambiguous"""
    for sigma in sorted(w_exp_ss(pair), key=SerreWeight.sort_key):
        try:
            jx = maximal_element(pair, sigma)
        except AmbiguityError:
            continue
        yield sigma, jx


# ============ Index-set rule ============
def ell_rule_prediction(pair: CharacterPair, sigma: SerreWeight):
    """
    CA indices predicted by the dimension-vector rule, and the grid points
    (i, j) that fall outside W'. Never raises on genericity.
    """
    data = jah_data(pair, sigma)
    indices = w_prime_sets(pair)[1]
    if is_cyclotomic_exceptional(pair, sigma, data):
        return frozenset(indices), []
    f = pair.f
    jx = data.jx
    ell = [jx.x[i] + (1 if jx.contains((i - 1) % f) else 0) for i in range(f)]
    members = w_prime(pair)
    grid = m_grid(pair)
    predicted, off_grid = set(), []
    for i in range(f):
        for j in range(ell[i]):
            if grid[i][j] in members:
                predicted.add(index_for(pair, i, j))
            else:
                off_grid.append((i, j))
    return frozenset(predicted), off_grid


def check_gen_conj(pair: CharacterPair) -> List[Finding]:
    suite = "gen-conj"
    findings = []
    boundary = is_boundary(pair.shape, pair.n)
    severity = "boundary-note" if boundary else "violation"
    failures = 0
    weights = list(_maximal_witnesses(pair))
    for sigma, _ in weights:
        direct = frozenset(a for a in jah_direct(pair, sigma) if not a.is_marker)
        predicted, off_grid = ell_rule_prediction(pair, sigma)
        if direct != predicted or off_grid:
            failures += 1
            findings.append(_finding(
                suite, pair,
                expected=f"l-rule {_tokens(predicted)}" + (f" off-grid {off_grid}" if off_grid else ""),
                observed=f"direct {_tokens(direct)}",
                severity=severity,
                weight=sigma.label,
            ))
    if boundary:
        verdict = "holds" if failures == 0 else f"fails for {failures} of {len(weights)} weights"
        findings.append(_finding(
            suite, pair,
            expected="classification of the l-rule on a boundary cell",
            observed=f"l-rule {verdict}",
            severity="boundary-note",
        ))
    return findings


# ============ Congruence solver ============
def check_congruence(pair: CharacterPair) -> List[Finding]:
    suite = "congruence"
    shape = pair.shape
    p, f = pair.p, pair.f
    findings = []
    budget = get_settings().congruence_budget
    for jx in all_jx(shape):
        c = c_of_jx(pair, jx)
        if any(not 1 <= v <= p - 1 for v in c):
            continue
        where = {"jx": jx.to_dict(), "c": list(c)}
        r = r_of(shape, jx.J, c)
        closed = solve_signed_congruence(shape, jx.J, c)
        if p ** f <= budget:
            solutions = brute_solutions(shape, jx.J, c)
            if solutions != closed:
                findings.append(_finding(
                    suite, pair, expected=f"oracle {sorted(solutions)}",
                    observed=f"closed form {sorted(closed)}", severity="violation", **where,
                ))
        else:
            solutions = closed
        if r not in solutions or any(not 1 <= v <= p for v in r):
            findings.append(_finding(
                suite, pair, expected=f"r(J,c) in {sorted(solutions)}",
                observed=f"r(J,c)={list(r)}", severity="violation", **where,
            ))
        if len(solutions) not in (1, 2) or (
            len(solutions) == 2 and solutions != complementary_pair(shape, jx.J)
        ):
            findings.append(_finding(
                suite, pair, expected="one solution or the complementary pair",
                observed=f"{sorted(solutions)}", severity="violation", **where,
            ))
        for tau0 in admissible_tau0(shape, jx.J, c):
            other = r_of(shape, jx.J, c, tau0=tau0)
            if other != r:
                findings.append(_finding(
                    suite, pair, expected=f"r independent of tau0, {list(r)}",
                    observed=f"tau0={tau0} gives {list(other)}",
                    severity=_weak_severity(pair), **where,
                ))
        exceptional = exceptional_configuration(pair, jx)
        if exceptional:
            expected = {constant(1, f), constant(p, f)}
            if solutions != expected or r != constant(1, f):
                findings.append(_finding(
                    suite, pair, expected=f"exceptional ({exceptional}): r=1, solutions {{1, p}}",
                    observed=f"r={list(r)}, solutions {sorted(solutions)}",
                    severity="violation", **where,
                ))
            else:
                findings.append(_finding(
                    suite, pair, expected=f"exceptional configuration ({exceptional})",
                    observed=f"solutions {sorted(solutions)}",
                    severity="boundary-note", **where,
                ))
        elif len(solutions) == 2:
            findings.append(_finding(
                suite, pair, expected="unique solution outside the exceptional configurations",
                observed=f"solutions {sorted(solutions)}",
                severity=solution_pair_severity(pair), **where,
            ))
    findings.extend(_check_maximal_selection(pair))
    return findings


def _check_maximal_selection(pair: CharacterPair) -> List[Finding]:
    """r(J, x) of the maximal witness recovers a-b+1"""
    findings = []
    p, f = pair.p, pair.f
    for sigma, jx in _maximal_witnesses(pair):
        c = c_of_jx(pair, jx)
        if any(not 1 <= v <= p - 1 for v in c):
            continue
        r = r_of_jx(pair, jx)
        exceptional = exceptional_configuration(pair, jx)
        if exceptional:
            ok = r == constant(1, f) and sigma.r in (r, constant(p, f))
        else:
            ok = sigma.r == r
        if not ok:
            findings.append(_finding(
                "congruence", pair, expected=f"a-b+1={list(sigma.r)}",
                observed=f"r(J,x)={list(r)}", severity=_weak_severity(pair),
                weight=sigma.label, jx=jx.to_dict(),
            ))
    return findings


# ============ Structure ============
def check_sset_max(pair: CharacterPair) -> List[Finding]:
    suite = "sset-max"
    findings = []
    enumerated = None
    if weight_count(pair.shape) <= get_settings().enumeration_budget:
        enumerated = w_exp_ss(pair, "enumerate")
        solved = w_exp_ss(pair, "solve")
        if enumerated != solved:
            findings.append(_finding(
                suite, pair, expected=f"{len(enumerated)} weights with witnesses",
                observed=f"{len(solved)} weights from solving", severity="violation",
            ))
    for sigma in sorted(enumerated or w_exp_ss(pair), key=SerreWeight.sort_key):
        witnesses = enumerate_sset(pair, sigma)
        if not witnesses:
            findings.append(_finding(
                suite, pair, expected="nonempty witness set", observed="empty",
                severity="violation", weight=sigma.label,
            ))
            continue
        for broken in preorder_failures(witnesses, sigma):
            findings.append(_finding(
                suite, pair,
                expected="reflexive" if len(broken) == 1 else "transitive",
                observed=" <= ".join(str(jx.to_dict()) for jx in broken),
                severity="violation", weight=sigma.label,
            ))
        try:
            jx = maximal_element(pair, sigma)
        except AmbiguityError as err:
            findings.append(_finding(
                suite, pair, expected="unique maximal witness",
                observed=f"{len(err.pairs)} candidates {[j.to_dict() for j in err.pairs]}",
                severity=_weak_severity(pair), weight=sigma.label,
            ))
            continue
        if not j_equals_t_less_r(pair, sigma, jx):
            findings.append(_finding(
                suite, pair, expected="J = {t < r}", observed=f"J={list(jx.members())}",
                severity=_weak_severity(pair), weight=sigma.label, jx=jx.to_dict(),
            ))
        try:
            back = st_to_jx(jx_to_st(jx, sigma), sigma)
        except InputError as err:
            back = str(err)
        if back != jx:
            findings.append(_finding(
                suite, pair, expected=f"(s,t) round trip to {jx.to_dict()}",
                observed=str(back.to_dict() if hasattr(back, "to_dict") else back),
                severity=_weak_severity(pair), weight=sigma.label,
            ))
        for u, v in symmetric_ties(pair, sigma):
            findings.append(_finding(
                suite, pair, expected="no symmetric ties in S",
                observed=f"{u.to_dict()} ~ {v.to_dict()}",
                severity="boundary-note", weight=sigma.label,
            ))
    return findings


def check_m_grid(pair: CharacterPair) -> List[Finding]:
    mismatched = m_grid_matches(pair)
    if not mismatched:
        return []
    per_j, _ = w_prime_sets(pair)
    grid = m_grid(pair)
    return [
        _finding(
            "m-grid", pair,
            expected=f"W'_{j} = {sorted({grid[i][j] for i in range(pair.f)})}",
            observed=f"W'_{j} = {list(per_j[j])}",
            severity=_weak_severity(pair),
        )
        for j in mismatched
    ]


def _valuation(pair: CharacterPair, value: int) -> float:
    return float("inf") if value == 0 else p_adic_valuation(pair.shape, value)


def check_props(pair: CharacterPair) -> List[Finding]:
    """Interval membership, valuation zero and one, j-closure, k-saturation"""
    suite = "props1-4"
    findings = []
    p, e, f, q = pair.p, pair.e, pair.f, pair.q
    severity = _weak_severity(pair)
    weak = is_weakly_generic(pair.shape, pair.n)
    _, f_second = period(pair.n)
    for sigma, _ in _maximal_witnesses(pair):
        data = jah_data(pair, sigma)
        t, r, s = data.t, data.r, data.s
        all_exceptional = all(
            t[i] == 0 and s[i] == p - 1 + e and r[i] == p for i in range(f)
        )
        valuation_one = e == 1 and all(
            r[i] == p and pair.n[i] == 1 and t[i] == 0 for i in range(f)
        )
        for i in range(f):
            where = {"weight": sigma.label, "embedding": i}
            if (t[i] in data.intervals[i]) != (t[i] < r[i]):
                findings.append(_finding(
                    suite, pair, expected="t in I iff t < r",
                    observed=f"t={t[i]}, r={r[i]}, I={list(data.intervals[i])}",
                    severity=severity, **where,
                ))
            for d in data.intervals[i]:
                positive = _valuation(pair, data.xi[i] - d * q) > 0
                allowed = d == t[i] or (all_exceptional and d == p)
                if positive != allowed:
                    findings.append(_finding(
                        suite, pair, expected=f"v_p(xi - {d}q) > 0 iff d = t or exceptional",
                        observed=f"xi={data.xi[i]}, v_p {'>' if positive else '='} 0",
                        severity=severity, **where,
                    ))
            if t[i] < r[i]:
                above_one = _valuation(pair, data.xi[i] - t[i] * q) > 1
                if above_one != valuation_one:
                    findings.append(_finding(
                        suite, pair, expected=f"v_p(xi - tq) > 1 is {valuation_one}",
                        observed=f"xi={data.xi[i]}, t={t[i]}",
                        severity=severity, **where,
                    ))
        direct = {a for a in jah_direct(pair, sigma, data) if not a.is_marker}
        if weak:
            for alpha in direct:
                i, j = embedding_coordinates(pair, alpha)
                if j >= 1 and index_for(pair, i, j - 1) not in direct:
                    findings.append(_finding(
                        suite, pair, expected=f"j-closure below {alpha.token()}",
                        observed=f"{index_for(pair, i, j - 1).token()} missing",
                        severity="violation", weight=sigma.label,
                    ))
        if f_second > 1:
            for alpha in direct:
                missing = [k for k in range(f_second) if BasisIndex.ca(alpha.m, k) not in direct]
                if missing:
                    findings.append(_finding(
                        suite, pair, expected=f"all k for m={alpha.m}",
                        observed=f"k={alpha.k} present, k={missing} absent",
                        severity="boundary-note", weight=sigma.label,
                    ))
    return findings


def check_cardinality(pair: CharacterPair) -> List[Finding]:
    findings = []
    for sigma, _ in _maximal_witnesses(pair):
        data = jah_data(pair, sigma)
        if is_cyclotomic_exceptional(pair, sigma, data):
            continue
        count = sum(1 for a in jah_direct(pair, sigma, data) if not a.is_marker)
        expected = sum(len(i) for i in data.intervals)
        if count != expected:
            findings.append(_finding(
                "cardinality", pair, expected=f"|J^AH| = sum |I| = {expected}",
                observed=f"{count}", severity=_weak_severity(pair), weight=sigma.label,
            ))
    return findings


def check_structure(pair: CharacterPair) -> List[Finding]:
    return (
        check_sset_max(pair)
        + check_m_grid(pair)
        + check_props(pair)
        + check_cardinality(pair)
    )


# ============ Packets, census, decomposition ============
def check_packets(pair: CharacterPair) -> List[Finding]:
    suite = "packets"
    table = packet_table(pair)
    findings = []
    strong = is_strongly_generic(pair.shape, pair.n)
    for sigma in table.unmatched:
        findings.append(_finding(
            suite, pair, expected="span equal to some L_w",
            observed=_tokens(table.spans[sigma]), severity="violation", weight=sigma.label,
        ))
    for sigma in table.tr_sensitive():
        findings.append(_finding(
            suite, pair, expected="span compared modulo TR",
            observed=f"span {_tokens(table.spans[sigma])}",
            severity="boundary-note", weight=sigma.label,
        ))
    for w, members in table.packets.items():
        bound = expected_packet_size(pair, w)
        ok = len(members) == bound if strong else len(members) <= bound
        if not ok:
            findings.append(_finding(
                suite, pair, expected=f"|P_w| {'=' if strong else '<='} {bound}",
                observed=f"{len(members)}", severity="violation", w=list(w),
            ))
    placed = sum(len(m) for m in table.packets.values())
    if placed + len(table.unmatched) != len(table.weights):
        findings.append(_finding(
            suite, pair, expected="packets partition the weight set",
            observed=f"{placed} placed of {len(table.weights)}", severity="violation",
        ))
    indices = list(table.l_w)
    for w in indices:
        for v in indices:
            below = all(a <= b for a, b in zip(w, v))
            if below != (table.l_w[w] >= table.l_w[v]):
                findings.append(_finding(
                    suite, pair, expected="w <= w' iff L_w contains L_w'",
                    observed=f"w={list(w)}, w'={list(v)}", severity="violation",
                ))
    return findings


def check_census(pair: CharacterPair) -> List[Finding]:
    suite = "census"
    findings = []
    weights = w_exp_ss(pair)
    if is_strongly_generic(pair.shape, pair.n):
        expected = expected_census(pair)
        if len(weights) != expected:
            findings.append(_finding(
                suite, pair, expected=f"|W| = {expected}", observed=f"{len(weights)}",
                severity="violation",
            ))
        images = {}
        for jx in all_jx(pair.shape):
            if exceptional_configuration(pair, jx):
                continue
            sigma, tabled = sigma_of_jx(pair, jx), sigma_of_jx_table(pair, jx)
            if sigma != tabled:
                findings.append(_finding(
                    suite, pair, expected=f"table weight {tabled.label}",
                    observed=f"{sigma.label}", severity="violation", jx=jx.to_dict(),
                ))
            images.setdefault(sigma, []).append(jx)
        for sigma, sources in images.items():
            if len(sources) > 1:
                findings.append(_finding(
                    suite, pair, expected="(J, x) -> sigma(J, x) injective",
                    observed=f"{sigma.label} from {[j.to_dict() for j in sources]}",
                    severity="violation",
                ))
    elif is_weakly_generic(pair.shape, pair.n):
        bound = (pair.e ** pair.f) * (2 ** pair.f)
        bound += int(inertia_is_cyclotomic(pair)) + int(inertia_is_inv_cyclotomic(pair))
        if len(weights) > bound:
            findings.append(_finding(
                suite, pair, expected=f"|W| <= {bound}", observed=f"{len(weights)}",
                severity="violation",
            ))
    if is_weakly_generic(pair.shape, pair.n):
        constructed = w_exp_ss(pair, "construct")
        if constructed != weights:
            findings.append(_finding(
                suite, pair, expected=f"{len(weights)} weights",
                observed=f"{len(constructed)} constructed, {len(exceptional_weights(pair))} exceptional",
                severity="violation",
            ))
    if pair.q <= get_settings().orbit_check_max_q:
        findings.extend(check_rotation_orbit(pair))
    return findings


def _orbit_signature(pair: CharacterPair):
    weights = w_exp_ss(pair)
    sizes = []
    for sigma in weights:
        try:
            sizes.append(len(jah_direct(pair, sigma)))
        except AmbiguityError:
            sizes.append(-1)
    return len(weights), sorted(sizes)


def check_rotation_orbit(pair: CharacterPair) -> List[Finding]:
    """Relabeling the base embedding must not change counts"""
    findings = []
    reference = _orbit_signature(pair)
    n2 = n2_vector(pair)
    for k in range(1, pair.f):
        rotated = pair.model_copy(update={
            "n": rotate(pair.n, k),
            "n2_class": omega_sum(pair.shape, n2, k) % pair.q,
        })
        signature = _orbit_signature(rotated)
        if signature != reference:
            findings.append(_finding(
                "census", pair, expected=f"rotation-invariant counts {reference}",
                observed=f"rotation {k}: {signature}", severity="violation",
            ))
    return findings


def class_supports(pair: CharacterPair, samples: int, rng: np.random.Generator) -> List[frozenset]:
    """Every support when the basis is small, else a seeded random sample"""
    indices = list(basis(pair))
    if len(indices) <= get_settings().exhaustive_class_limit:
        return [
            frozenset(a for a, bit in zip(indices, bits) if bit)
            for bits in product((0, 1), repeat=len(indices))
        ]
    draws = rng.integers(0, 2, size=(samples, len(indices)))
    return [frozenset(a for a, bit in zip(indices, row) if bit) for row in draws]


def check_decomposition(pair: CharacterPair, class_samples: int = None,
                        rng: Optional[np.random.Generator] = None) -> List[Finding]:
    suite = "decomposition"
    settings = get_settings()
    samples = settings.class_samples if class_samples is None else class_samples
    rng = rng or np.random.default_rng([settings.random_seed, pair.p, pair.f, pair.e, *pair.n])
    table = packet_table(pair)
    findings = []
    for support in class_supports(pair, samples, rng):
        cls = ExtensionClass(support=support)
        where = {"class": cls.tokens()}
        result = weight_set(pair, cls)
        if result.tres_ramifiee:
            expected = tres_ramifiee_weight(pair)
            if result.weights != {expected} or not result.agrees:
                findings.append(_finding(
                    suite, pair, expected=f"single weight {expected.label}",
                    observed=f"{sorted(s.label for s in result.weights)}, direct "
                             f"{sorted(s.label for s in result.direct)}",
                    severity="violation", **where,
                ))
            continue
        if not result.agrees:
            findings.append(_finding(
                suite, pair, expected=f"direct {sorted(s.label for s in result.direct)}",
                observed=f"packets {sorted(s.label for s in result.weights)}",
                severity="violation", **where,
            ))
        admissible = set(admissible_indices(pair, cls))
        for w in admissible:
            for v in product(*(range(x + 1) for x in w)):
                if v not in admissible:
                    findings.append(_finding(
                        suite, pair, expected="admissible indices downward closed",
                        observed=f"{list(w)} admissible, {list(v)} not",
                        severity="violation", **where,
                    ))
        below = [w for w in table.packets if all(a <= b for a, b in zip(w, result.w_max))]
        if sum(len(table.packets[w]) for w in below) != len(result.weights):
            findings.append(_finding(
                suite, pair, expected="disjoint union of packets below w_max",
                observed=f"{len(result.weights)} weights", severity="violation", **where,
            ))
    return findings


def check_packets_and_decomposition(pair: CharacterPair, class_samples: int = None) -> List[Finding]:
    return check_packets(pair) + check_census(pair) + check_decomposition(pair, class_samples)


SUITE_CHECKS: Dict[str, Callable[[CharacterPair], List[Finding]]] = {
    "gen-conj": check_gen_conj,
    "congruence": check_congruence,
    "sset-max": check_sset_max,
    "m-grid": check_m_grid,
    "props1-4": check_props,
    "cardinality": check_cardinality,
    "packets": check_packets,
    "decomposition": check_decomposition,
    "census": check_census,
}

WEAK_ONLY_SUITES = ("packets", "decomposition")
