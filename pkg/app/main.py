"""
The sw command line: weight sets, index sets, witness sets, the signed
congruence, packets and verification sweeps.

    python -m app.main weights --p 5 --f 1 --e 1 --n 2 --n2 0 --class 2:0
"""
import argparse
import sys
from typing import Dict, List, Optional

from pydantic import ValidationError

from app.config import configure_logging, get_settings
from app.exceptions import AmbiguityError, InputError, InvariantFailure, SerreWeightError
from app.models.schemas import SUITES, CharacterPair, ExtensionClass, FieldShape, JXPair, SweepConfig
from app.services.congruence import (
    admissible_tau0,
    c_of_jx,
    exceptional_configuration,
    r_of,
    solve_signed_congruence,
)
from app.services.ground import is_weakly_generic, make_pair, validate_flags
from app.services.jah import dimension_vector, jah_data, jah_direct, jah_fast
from app.services.packets import make_class, packet_table, w_exp_ss, weight_set
from app.services.serre_weights import parse_weight
from app.services.sset import enumerate_sset, jx_to_st, maximal_element
from app.services.sweep import sweep, write_json, write_tsv
from app.services.sweep import render_pretty as render_sweep
from app.utils.formatting import (
    dump_json,
    indices_json,
    parse_class_tokens,
    parse_csv_ints,
    render_pretty,
    weight_labels,
    with_schema,
)
from app.utils.vectors import mask_from_members

EXIT_OK, EXIT_VIOLATIONS, EXIT_INPUT = 0, 1, 2


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors raise instead of exiting so run() owns the exit status"""

    def error(self, message):
        raise InputError(message, "argv")


# ============ Parser ============
def _add_pair_arguments(parser: argparse.ArgumentParser, weight: bool = False,
                        cls: bool = False) -> None:
    parser.add_argument("--p", type=int, required=True, help="residue characteristic")
    parser.add_argument("--f", type=int, required=True, help="residue degree")
    parser.add_argument("--e", type=int, required=True, help="ramification degree")
    parser.add_argument("--n", required=True, help="inertia exponents of chi, CSV")
    parser.add_argument("--n2", default="0", help="exponents of chi2 (CSV of length f) or its class")
    parser.add_argument("--chi-trivial", action="store_true")
    parser.add_argument("--chi-cyclotomic", action="store_true")
    parser.add_argument("--chi-inv-cyclotomic", action="store_true")
    parser.add_argument("--chi2-unramified", action="store_true")
    if weight:
        parser.add_argument("--weight", required=True, help="a0,a1/b0,b1")
    if cls:
        parser.add_argument("--class", dest="cls", default=None, help="support tokens m:k,un,tr")


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "tsv", "pretty"], default="json")
    parser.add_argument("--out", default=None, help="write output to this path")
    parser.add_argument("--jobs", type=int, default=get_settings().default_jobs)
    parser.add_argument("--deterministic", action="store_true", help="suppress timing fields")


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(prog="sw", description="Serre weights of reducible mod p representations")
    parser.add_argument("--log-level", default=None)
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    weights = commands.add_parser("weights", help="semisimple weight set, or the weight set of a class")
    _add_pair_arguments(weights, cls=True)
    _add_output_arguments(weights)

    jah = commands.add_parser("jah", help="index set of a weight")
    _add_pair_arguments(jah, weight=True)
    _add_output_arguments(jah)

    sset = commands.add_parser("sset", help="witness set and its maximal element")
    _add_pair_arguments(sset, weight=True)
    _add_output_arguments(sset)

    solve = commands.add_parser("solve-congruence", help="r(J, c) and every solution")
    solve.add_argument("--p", type=int, required=True)
    solve.add_argument("--f", type=int, required=True)
    solve.add_argument("--e", type=int, default=1)
    solve.add_argument("--J", dest="J", default="", help="members of J, CSV (empty for none)")
    target = solve.add_mutually_exclusive_group(required=True)
    target.add_argument("--c", default=None, help="c vector, CSV")
    target.add_argument("--x", default=None, help="x vector, CSV (needs --n)")
    solve.add_argument("--n", default=None)
    solve.add_argument("--n2", default="0")
    solve.add_argument("--tau0", type=int, default=None)
    _add_output_arguments(solve)

    packets = commands.add_parser("packets", help="packets P_w, w^max and the weight set of a class")
    _add_pair_arguments(packets, cls=True)
    _add_output_arguments(packets)

    verify = commands.add_parser("verify", help="run check suites over a grid")
    verify.add_argument("--suite", default=",".join(SUITES), help="suite names, CSV")
    verify.add_argument("--primes", default="2,3,5,7")
    verify.add_argument("--max-f", type=int, default=2)
    verify.add_argument("--max-e", type=int, default=2)
    verify.add_argument("--max-ef", type=int, default=4)
    verify.add_argument("--filter", choices=["all", "weak", "strong", "boundary"], default="all")
    verify.add_argument("--class-samples", type=int, default=get_settings().class_samples)
    verify.add_argument("--seed", type=int, default=get_settings().random_seed)
    _add_output_arguments(verify)
    return parser


# ============ Argument decoding ============
def _shape(args) -> FieldShape:
    return FieldShape(p=args.p, f=args.f, e=args.e)


def _pair(args) -> CharacterPair:
    shape = _shape(args)
    pair = make_pair(
        shape,
        parse_csv_ints(args.n, "n"),
        parse_csv_ints(args.n2, "n2"),
        chi_trivial=args.chi_trivial,
        chi_cyclotomic=args.chi_cyclotomic,
        chi_inv_cyclotomic=args.chi_inv_cyclotomic,
        chi2_unramified=args.chi2_unramified,
    )
    problems = validate_flags(pair)
    if problems:
        raise InputError("; ".join(problems), "flags")
    return pair


def _class(pair: CharacterPair, text: str) -> ExtensionClass:
    return make_class(pair, parse_class_tokens(text))


# ============ Commands ============
def _class_result(pair: CharacterPair, cls: ExtensionClass) -> Dict:
    result = weight_set(pair, cls)
    return {
        "class": cls.tokens(),
        "weight_set": weight_labels(result.weights),
        "tres_ramifiee": result.tres_ramifiee,
        "w_max": list(result.w_max) if result.w_max is not None else None,
        "agrees_with_spans": result.agrees,
    }


def cmd_weights(args) -> Dict:
    pair = _pair(args)
    payload = {"pair": pair.to_dict(), "w_exp_ss": weight_labels(w_exp_ss(pair))}
    if args.cls is not None:
        payload.update(_class_result(pair, _class(pair, args.cls)))
    return payload


def cmd_jah(args) -> Dict:
    pair = _pair(args)
    sigma = parse_weight(pair.shape, args.weight)
    data = jah_data(pair, sigma)
    payload = {
        "pair": pair.to_dict(),
        "weight": sigma.label,
        "jah": indices_json(jah_direct(pair, sigma, data)),
        "ell": list(dimension_vector(pair, sigma).ell),
        "data": data.to_dict(),
    }
    if is_weakly_generic(pair.shape, pair.n):
        payload["jah_fast"] = indices_json(jah_fast(pair, sigma))
    return payload


def cmd_sset(args) -> Dict:
    pair = _pair(args)
    sigma = parse_weight(pair.shape, args.weight)
    witnesses = enumerate_sset(pair, sigma)
    payload = {
        "pair": pair.to_dict(),
        "weight": sigma.label,
        "sset": [jx.to_dict() for jx in sorted(witnesses, key=JXPair.sort_key)],
        "maximal": None,
        "ambiguous": [],
    }
    try:
        jx = maximal_element(pair, sigma)
    except AmbiguityError as err:
        payload["ambiguous"] = [j.to_dict() for j in err.pairs]
        return payload
    if jx is not None:
        st = jx_to_st(jx, sigma)
        payload["maximal"] = {**jx.to_dict(), "s": list(st.s), "t": list(st.t)}
    return payload


def cmd_solve_congruence(args) -> Dict:
    shape = _shape(args)
    J = mask_from_members(parse_csv_ints(args.J, "J") if args.J else ())
    if J >= 1 << shape.f:
        raise InputError(f"J must be a subset of [0, {shape.f - 1}]", "J")
    payload = {"shape": shape.to_dict(), "J": [i for i in range(shape.f) if J >> i & 1]}
    if args.x is not None:
        if args.n is None:
            raise InputError("--x needs --n", "n")
        pair = make_pair(shape, parse_csv_ints(args.n, "n"), parse_csv_ints(args.n2, "n2"))
        jx = JXPair(J=J, x=parse_csv_ints(args.x, "x"))
        c = c_of_jx(pair, jx)
        payload["x"] = list(jx.x)
        payload["exceptional"] = exceptional_configuration(pair, jx)
    else:
        c = parse_csv_ints(args.c, "c")
    r = r_of(shape, J, c, tau0=args.tau0)
    payload.update({
        "c": list(c),
        "r": list(r),
        "admissible_tau0": admissible_tau0(shape, J, c),
        "solutions": [list(s) for s in sorted(solve_signed_congruence(shape, J, c))],
    })
    return payload


def cmd_packets(args) -> Dict:
    pair = _pair(args)
    table = packet_table(pair)
    payload = {
        "pair": pair.to_dict(),
        "w_exp_ss": weight_labels(table.weights),
        "packets": [
            {"w": list(w), "weights": weight_labels(members)}
            for w, members in sorted(table.packets.items())
        ],
        "unmatched": weight_labels(table.unmatched),
        "tr_sensitive": weight_labels(table.tr_sensitive()),
    }
    if args.cls is not None:
        payload.update(_class_result(pair, _class(pair, args.cls)))
    return payload


def cmd_verify(args):
    config = SweepConfig(
        primes=list(parse_csv_ints(args.primes, "primes")),
        max_f=args.max_f,
        max_e=args.max_e,
        max_ef=args.max_ef,
        genericity_filter=args.filter,
        suites=[s.strip() for s in args.suite.split(",") if s.strip()],
        class_samples=args.class_samples,
        jobs=args.jobs,
        seed=args.seed,
        deterministic=args.deterministic,
    )
    return sweep(config)


COMMANDS = {
    "weights": cmd_weights,
    "jah": cmd_jah,
    "sset": cmd_sset,
    "solve-congruence": cmd_solve_congruence,
    "packets": cmd_packets,
}


def _tsv(payload: Dict) -> str:
    """key<TAB>value rows, lists joined by ';'"""
    rows = []
    for key, value in payload.items():
        if isinstance(value, list):
            value = ";".join(str(v) for v in value)
        rows.append(f"{key}\t{value}")
    return "\n".join(rows) + "\n"


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _argument_of(err: ValidationError) -> str:
    for error in err.errors():
        if error.get("loc"):
            return str(error["loc"][0])
    return "input"


def run(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.log_level)
        if args.command == "verify":
            report = cmd_verify(args)
            if args.format == "tsv":
                text = write_tsv(report)
            elif args.format == "pretty":
                text = render_sweep(report)
            else:
                text = write_json(report)
            _emit(text, args.out)
            return EXIT_OK if report.is_valid() else EXIT_VIOLATIONS
        payload = with_schema({"command": args.command, **COMMANDS[args.command](args)})
        if args.format == "tsv":
            text = _tsv(payload)
        elif args.format == "pretty":
            text = render_pretty(payload)
        else:
            text = dump_json(payload)
        _emit(text, args.out)
        return EXIT_OK
    except InputError as err:
        print(f"sw: error: {err.argument or 'input'}: {err}", file=sys.stderr)
        return EXIT_INPUT
    except ValidationError as err:
        print(f"sw: error: {_argument_of(err)}: {err.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_INPUT
    except (AmbiguityError, InvariantFailure) as err:
        # not the caller's fault; no argument to blame
        print(f"sw: internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INPUT
    except SerreWeightError as err:
        print(f"sw: error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(run())
