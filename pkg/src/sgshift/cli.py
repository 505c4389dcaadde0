"""Command-line interface: ``sgs <command> ...``.

Graph files use the JSON layout of :func:`sgshift.graph.serialize_sgraph`.
Set flags use the compact literal syntax: ``1,3,5`` (finite), ``2+2k``
(``{2, 4, 6, ...}``), ``N`` (all positive integers), combined with commas.

Output is a single JSON document unless ``--format human`` is given;
``oracle words`` prints one word per line by default.  Exit status is 0 on
success, 1 for bad input and 2 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from . import construct, dynamics, oracle, transforms, zeta
from .entropy import DEFAULT_TOL, METHODS, entropy
from .errors import InvariantError, SGSError
from .graph import (
    SGraph,
    build_s_gap,
    build_ss_gap,
    build_ordered_limited,
    build_unordered_limited,
    load_sgraph,
    serialize_sgraph,
)
from .nset import parse_literal

SET_HELP = "set literal: '1,3,5', '2+2k' for {2,4,6,...}, 'N' for all positive integers"


class UsageError(Exception):
    """Raised instead of argparse's own exit so the status code stays 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output ----------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "numerator") and not isinstance(obj, int):
        return str(obj)
    return obj


def _emit(doc, fmt: str, out) -> None:
    doc = _jsonable(doc)
    if fmt == "json":
        out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
        return
    for key, value in doc.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value)
        out.write(f"{key}: {value}\n")


def _write_graph(g: SGraph, path: Optional[str]) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(serialize_sgraph(g) + "\n")


def _sets(text: str) -> list:
    return [parse_literal(t) for t in text.split(";") if t.strip()]


# -- commands --------------------------------------------------------------------


def cmd_entropy(args) -> dict:
    g = load_sgraph(args.graph)
    return entropy(g, method=args.method, tol=args.tol).to_json()


def cmd_props(args) -> dict:
    g = load_sgraph(args.graph)
    doc = dynamics.properties(g).to_json()
    if doc["weak_spec"] and not g.approximate:
        doc["spec_constants"] = dynamics.spec_constants(g, args.m).to_json()
    return doc


def cmd_zeta(args) -> dict:
    g = load_sgraph(args.graph)
    order = args.order or zeta.default_order()
    p = zeta.periodic_counts(g, order)
    return {
        "order": order,
        "p1": zeta.p1_count(g),
        "zeta": zeta.zeta_coeffs(g, order).as_ints(),
        "det": list(zeta.fingerprint(g, order).det_coeffs),
        "p": p,
        "q": zeta.least_period_counts(p),
    }


def cmd_fingerprint(args) -> dict:
    order = args.order or zeta.default_order()
    fps = [zeta.fingerprint(load_sgraph(path), order) for path in args.graphs]
    doc = {"order": order, "fingerprints": [f.to_json() for f in fps]}
    if len(fps) == 2:
        doc["comparison"] = zeta.fingerprint_compare(*fps)
    return doc


def cmd_op(args) -> dict:
    g = load_sgraph(args.graph)
    if args.kind == "edge-extend":
        if args.t1 is None or args.t2 is None:
            raise UsageError("edge-extend needs --t1 and --t2")
        new, rec = transforms.edge_extend(g, args.vertex, parse_literal(args.t1), parse_literal(args.t2))
    elif args.kind in ("out-split", "in-split"):
        if args.e1 is None or args.e2 is None:
            raise UsageError(f"{args.kind} needs --e1 and --e2")
        e1 = [x for x in args.e1.split(",") if x]
        e2 = [x for x in args.e2.split(",") if x]
        fn = transforms.out_split if args.kind == "out-split" else transforms.in_split
        new, rec = fn(g, args.vertex, e1, e2)
    else:
        if args.s1 is None or args.s2 is None:
            raise UsageError("clone needs --s1 and --s2")
        new, rec = transforms.vertex_clone(g, args.vertex, parse_literal(args.s1), parse_literal(args.s2))
    _write_graph(new, args.out)
    return {"record": rec.to_json(), "graph": new.to_json()}


def cmd_lift(args) -> dict:
    g = load_sgraph(args.graph)
    new, records = transforms.lift(g, args.q)
    _write_graph(new, args.out)
    return {"records": [r.to_json() for r in records], "graph": new.to_json()}


def cmd_construct(args) -> dict:
    if args.flavor == "spiced":
        exp = construct.spiced_expansion(args.lam, args.budget or construct.digit_budget(args.lam))
    else:
        exp = construct.greedy_beta_expansion(args.lam, args.budget or construct.digit_budget(args.lam))
    g = construct.bipartite_from_expansion(exp)
    _write_graph(g, args.out)
    return {"expansion": exp.to_json(), "entropy": entropy(g).to_json(), "graph": g.to_json()}


def cmd_family(args) -> dict:
    exp = construct.family_basis(args.lam, args.budget)
    base = construct.bipartite_from_expansion(exp)
    g, rec = construct.seeded_clone(base, "1", args.seed)
    _write_graph(g, args.out)
    return {
        "expansion": exp.to_json(),
        "clone": rec.to_json(),
        "entropy": entropy(g).to_json(),
        "spec": dynamics.has_spec(g),
        "graph": g.to_json(),
    }


def cmd_oracle(args, out) -> Optional[dict]:
    g = load_sgraph(args.graph)
    if args.kind == "words":
        words = [oracle.render_word(g, w) for w in oracle.enum_words(g, args.n, args.lower_bound)]
        if args.format == "json":
            return {"n": args.n, "count": len(words), "words": words}
        out.write("".join(w + "\n" for w in words))
        return None
    if args.kind == "periodic":
        count, reps = oracle.enum_periodic(g, args.n, args.lower_bound)
        return {"n": args.n, "p_n": count, "orbits": [oracle.render_word(g, w) for w in reps]}
    count = oracle.count_words(g, args.n, args.lower_bound)
    return {"n": args.n, "word_count": count, "entropy_estimate": math.log(count) / args.n}


def cmd_crosscheck(args) -> dict:
    return oracle.crosscheck(load_sgraph(args.graph), args.N, args.entropy_tol).to_json()


def cmd_builders(args) -> dict:
    if args.kind == "s-gap":
        zero, S = parse_literal(args.set, allow_zero=True)
        g = build_s_gap(S, zero)
    elif args.kind == "ss-gap":
        if args.set_prime is None:
            raise UsageError("ss-gap needs --set-prime")
        g = build_ss_gap(parse_literal(args.set), parse_literal(args.set_prime))
    elif args.kind == "ordered":
        g = build_ordered_limited(_sets(args.set))
    else:
        g = build_unordered_limited(_sets(args.set))
    _write_graph(g, args.out)
    return g.to_json()


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sgs", description="Entropy, zeta functions and transformations of S-graph shifts.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "human"), default=None, help="output format (default json)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def graph_cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("graph", help="graph JSON file")
        return sp

    sp = graph_cmd("entropy", "entropy of the shift")
    sp.add_argument("--method", choices=METHODS, default="spectral")
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)

    sp = graph_cmd("props", "SFT, sofic, mixing and specification checks")
    sp.add_argument("--m", type=int, default=1, help="threshold m for the constant r")

    sp = graph_cmd("zeta", "zeta coefficients and periodic-point counts")
    sp.add_argument("--order", type=int, default=None)

    sp = sub.add_parser("fingerprint", help="conjugacy fingerprint (p1, det(I - B(t)))")
    sp.add_argument("graphs", nargs="+", help="one graph, or two to compare")
    sp.add_argument("--order", type=int, default=None)

    sp = sub.add_parser("op", help="apply one entropy-preserving operation")
    sp.add_argument("kind", choices=("edge-extend", "out-split", "in-split", "clone"))
    sp.add_argument("graph", help="graph JSON file")
    sp.add_argument("--vertex", required=True)
    sp.add_argument("--t1", help=SET_HELP)
    sp.add_argument("--t2", help=SET_HELP)
    sp.add_argument("--e1", help="comma-separated vertex names")
    sp.add_argument("--e2", help="comma-separated vertex names")
    sp.add_argument("--s1", help=SET_HELP)
    sp.add_argument("--s2", help=SET_HELP)
    sp.add_argument("--out")

    sp = graph_cmd("lift", "conjugate shift on exactly q letters")
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("--out")

    sp = sub.add_parser("construct", help="K_{n,n} shift with entropy log(lambda)")
    sp.add_argument("--lambda", dest="lam", required=True, help="number or expression, e.g. '2+sqrt(3)', 'phi'")
    sp.add_argument("--flavor", choices=("greedy", "spiced"), default="greedy")
    sp.add_argument("--budget", type=int, default=None, help="number of digits to compute")
    sp.add_argument("--out")

    sp = sub.add_parser("family", help="seeded shift with specification and entropy log(lambda)")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=None)
    sp.add_argument("--out")

    sp = sub.add_parser("oracle", help="brute-force words and periodic points")
    sp.add_argument("kind", choices=("words", "periodic", "estimate"))
    sp.add_argument("graph")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--lower-bound", action="store_true", help="allow approximate sets")

    sp = graph_cmd("crosscheck", "compare brute force with the analytic answers")
    sp.add_argument("-N", type=int, default=10)
    sp.add_argument("--entropy-tol", type=float, default=0.1)

    sp = sub.add_parser("builders", help="named constructions")
    sp.add_argument("kind", choices=("s-gap", "ss-gap", "ordered", "unordered"))
    sp.add_argument("--set", required=True, help=SET_HELP + "; '0' allowed for s-gap; ';' separates sets for ordered/unordered")
    sp.add_argument("--set-prime", help="second set for ss-gap")
    sp.add_argument("--out")
    return p


_COMMANDS = {
    "entropy": cmd_entropy,
    "props": cmd_props,
    "zeta": cmd_zeta,
    "fingerprint": cmd_fingerprint,
    "op": cmd_op,
    "lift": cmd_lift,
    "construct": cmd_construct,
    "family": cmd_family,
    "crosscheck": cmd_crosscheck,
    "builders": cmd_builders,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"sgs: error: {exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    fmt = args.format or "json"
    try:
        if args.command == "oracle":
            doc = cmd_oracle(args, out)
        else:
            doc = _COMMANDS[args.command](args)
        if doc is not None:
            _emit(doc, fmt, out)
    except InvariantError as exc:
        err.write(f"sgs: internal error: {exc}\n")
        return 2
    except (SGSError, UsageError, ValueError, OSError) as exc:
        err.write(f"sgs: error: {exc}\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
