"""``relcirc`` command line: denote, compare, solve and check circuits.

Files ending in ``.ckt`` hold a term, files ending in ``.net`` a netlist.

Exit codes: 0 success, 1 a negative verdict (not equal, check failed),
2 a parse or sort error in an input, 3 an input that violates the
command's precondition.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .affine import AffineRelation, contains
from .analysis import (
    BadPayloadSort, ForbiddenElement, IndependentSourcePresent, InvariantViolation,
    check_independent_measurement, check_port_invariants, check_superposition, measure,
    thevenin,
)
from .axioms import Axiom, axioms_suite
from .diagram import BadParameter, IllFormedBox, SortMismatch, TermSyntaxError, parse_term, \
    pretty_print, sort_check
from .field import FieldError, format_value
from .netlist import NetlistSyntaxError, netlist_to_relation_direct, netlist_to_term, \
    parse_netlist
from .random_circuits import rand_scalar
from .semantics import denote

EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    """Unreadable or ill-formed input file."""


class PreconditionError(Exception):
    pass


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_netlist(path):
    try:
        return parse_netlist(_read(path))
    except NetlistSyntaxError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_term(path):
    """Term from a ``.ckt`` file, or the compiled term of a ``.net`` file."""
    if str(path).endswith(".net"):
        return netlist_to_term(load_netlist(path))
    if not str(path).endswith(".ckt"):
        raise InputError(f"{path}: unknown file type (expected .ckt or .net)")
    try:
        t = parse_term(_read(path))
        sort_check(t)
    except (TermSyntaxError, SortMismatch, IllFormedBox, BadParameter, FieldError) as exc:
        raise InputError(f"{path}: {exc}") from None
    return t


# rendering -------------------------------------------------------------------------------

def _fmt_vec(vec):
    return "(" + ", ".join(format_value(v) for v in vec) + ")"


def render_relation(R: AffineRelation) -> str:
    lines = [f"relation {R.dom_width} -> {R.cod_width}"]
    if R.is_empty:
        lines.append("empty")
        return "\n".join(lines)
    lines.append(f"offset: {_fmt_vec(R.offset)}")
    if R.basis:
        lines.append("basis:")
        lines += [f"  {_fmt_vec(b)}" for b in R.basis]
    else:
        lines.append("basis: none")
    return "\n".join(lines)


def _emit(args, data, text):
    if args.json:
        print(json.dumps(data, sort_keys=False))
    else:
        print(text)


# commands ----------------------------------------------------------------------------------

def cmd_denote(args):
    R = denote(load_term(args.file))
    _emit(args, R.to_json(), render_relation(R))
    return EXIT_OK


def _compare(args, leq):
    R1, R2 = denote(load_term(args.file1)), denote(load_term(args.file2))
    if (R1.dom_width, R1.cod_width) != (R2.dom_width, R2.cod_width):
        raise PreconditionError(
            f"relations have different types: {R1.dom_width}->{R1.cod_width} "
            f"and {R2.dom_width}->{R2.cod_width}")
    if leq:
        verdict = contains(R2, R1)
        word = "contained" if verdict else "not contained"
    else:
        verdict = R1 == R2
        word = "equal" if verdict else "not equal"
    _emit(args, {"verdict": verdict, "result": word}, word)
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_thevenin(args):
    form = thevenin(load_term(args.file))
    data = form.to_json()
    if form.case == "series_vr":
        text = f"series_vr: V0 = {data['V0']}, R = {data['R']}"
    elif form.case == "current_src":
        text = f"current_src: I0 = {data['I0']}"
    elif form.case == "empty":
        text = "empty: the one-port has no consistent behaviour"
    else:
        text = "non_canonical:\n" + render_relation(form.Z)
    _emit(args, data, text)
    return EXIT_OK


def cmd_measure(args):
    res = measure(load_term(args.file))
    data = res.to_json()
    if res.classification == "unique_point":
        text = "unique_point: " + " ".join(data["values"])
    elif res.classification == "underdetermined":
        text = f"underdetermined: dimension {res.dim}\n" + render_relation(res.relation)
    else:
        text = "empty: no consistent readings"
    _emit(args, data, text)
    return EXIT_OK


def cmd_check(args):
    t = load_term(args.file)
    if args.invariants:
        inv = check_port_invariants(t)
        ok = inv.relativity and inv.conservation
        text = f"relativity: {inv.relativity}\nconservation: {inv.conservation}"
        _emit(args, inv.as_dict(), text)
        return EXIT_OK if ok else EXIT_FALSE
    report = (check_independent_measurement(t) if args.independent_measurement
              else check_superposition(t))
    witness = ", ".join(
        f"{'total' if w.total else 'not total'}/"
        f"{'single-valued' if w.single_valued else 'multi-valued'}"
        for w in report.functional_witness) or "none"
    text = "\n".join([
        f"inclusion: {report.inclusion_holds}",
        f"equality: {report.equality_holds}" + ("  (strict inclusion)" if report.strict else ""),
        f"single-source/single-meter relations: {witness}",
    ])
    _emit(args, report.to_json(), text)
    return EXIT_OK if report.inclusion_holds else EXIT_FALSE


def cmd_netlist(args):
    if not args.file.endswith(".net"):
        raise InputError(f"{args.file}: netlist command needs a .net file")
    nl = load_netlist(args.file)
    if args.to_term:
        text = pretty_print(netlist_to_term(nl))
        _emit(args, {"term": text}, text)
    else:
        R = netlist_to_relation_direct(nl) if args.oracle else denote(netlist_to_term(nl))
        _emit(args, R.to_json(), render_relation(R))
    return EXIT_OK


def _sampled_axioms(n, seed):
    rng = random.Random(seed)
    out = []
    for k in range(n):
        a, b = rand_scalar(rng, 0.3), rand_scalar(rng, 0.3)
        a_s, b_s = f"({a})", f"({b})"
        out.append(Axiom(f"sample{k}-scalar-sum", "sampled",
                         f"copy ; (scalar{a_s} | scalar{b_s}) ; add", f"scalar({a_s}+{b_s})"))
        out.append(Axiom(f"sample{k}-scalar-mult", "sampled",
                         f"scalar{a_s} ; scalar{b_s}", f"scalar({a_s}*{b_s})"))
        if a:
            out.append(Axiom(f"sample{k}-scalar-inverse", "sampled",
                             f"scalar{a_s} ; coscalar{a_s}", "id:n"))
    return out


def cmd_axioms(args):
    from .axioms import AXIOMS
    axioms = list(AXIOMS) + _sampled_axioms(args.samples, args.seed)
    results = axioms_suite(axioms)
    failed = [r for r in results if not r.passed]
    if args.json:
        print(json.dumps({"passed": len(results) - len(failed), "failed": len(failed),
                          "axioms": [r.to_json() for r in results]}))
    else:
        width = max(len(r.axiom.name) for r in results)
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.axiom.name:<{width}}  "
                  f"{r.axiom.lhs}  {r.axiom.relation}  {r.axiom.rhs}")
        print(f"{len(results) - len(failed)}/{len(results)} axioms hold")
    return EXIT_FALSE if failed else EXIT_OK


# argument parsing -----------------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled instances")

    p = argparse.ArgumentParser(prog="relcirc", parents=[common],
                                description="Exact relational semantics for circuits.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("denote", parents=[common], help="print the relation of a circuit")
    s.add_argument("file")
    s.set_defaults(func=cmd_denote)

    for name, leq, help_ in (("eq", False, "decide equality of two circuits"),
                             ("leq", True, "decide containment of the first in the second")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("file1")
        s.add_argument("file2")
        s.set_defaults(func=lambda a, leq=leq: _compare(a, leq))

    s = sub.add_parser("thevenin", parents=[common], help="canonical form of a one-port")
    s.add_argument("file")
    s.set_defaults(func=cmd_thevenin)

    s = sub.add_parser("measure", parents=[common], help="solve a closed metered circuit")
    s.add_argument("file")
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("check", parents=[common], help="run a structural check")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--invariants", action="store_true")
    mode.add_argument("--independent-measurement", action="store_true")
    mode.add_argument("--superposition", action="store_true")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("netlist", parents=[common], help="compile or solve a netlist")
    s.add_argument("file")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--to-term", action="store_true")
    mode.add_argument("--denote", action="store_true")
    mode.add_argument("--oracle", action="store_true",
                      help="solve by nodal equations instead of compiling")
    s.set_defaults(func=cmd_netlist)

    s = sub.add_parser("axioms", parents=[common], help="check the built-in axiom instances")
    s.add_argument("--samples", type=int, default=0,
                   help="also check this many randomly sampled scalar laws")
    s.set_defaults(func=cmd_axioms)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, ForbiddenElement, IndependentSourcePresent, SortMismatch,
            BadPayloadSort, InvariantViolation) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
