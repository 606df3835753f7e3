"""Command line front end.

Graph arguments accept a built-in name (perm_g, perm_h, k4, path4, edge), a
JSON file, or ``term:<text>``.  Algebra arguments accept a built-in name
(z2, chain2, chain3, set3), optionally raised to a power as ``z2^2``, or a
JSON file.  Exit codes: 0 success / verified, 1 verification failure,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from . import algebra as alg_mod
from . import verify
from .algebra import FiniteAlgebra
from .connect import check_inclusion, connect, relation
from .fixtures import BUILTIN_GRAPHS, builtin_graph
from .graphs import LabeledGraph, canonical_form, is_regular, k_constants, label_partition
from .malcev import generate
from .relations import FinRelation
from .terms import max_index, parse_term, print_term, term_to_graph, term_to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Workspace:
    """Objects loaded for one command, cached by the string that named them."""

    fmt: str = "text"
    graphs: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)

    def graph(self, spec: str) -> LabeledGraph:
        if spec not in self.graphs:
            if spec.startswith("term:"):
                t = parse_term(spec[5:], 64)
                self.graphs[spec] = term_to_graph(t, max_index(t))
            elif spec in BUILTIN_GRAPHS:
                self.graphs[spec] = builtin_graph(spec)
            else:
                self.graphs[spec] = LabeledGraph.from_json(_read_json(spec))
        return self.graphs[spec]

    def algebra(self, spec: str) -> FiniteAlgebra:
        if spec not in self.algebras:
            base, _, exp = spec.partition("^")
            if base in alg_mod.BUILTIN_ALGEBRAS:
                a = alg_mod.builtin_algebra(base)
            else:
                a = FiniteAlgebra.from_json(_read_json(base), name=Path(base).stem)
            if exp:
                a = alg_mod.power(a, int(exp))
            self.algebras[spec] = a
        return self.algebras[spec]

    def relation(self, path: str) -> FinRelation:
        if path not in self.relations:
            self.relations[path] = FinRelation.from_json(_read_json(path))
        return self.relations[path]


def _read_json(path: str):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file or built-in name: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc})") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False))


def _bool(ws: Workspace, value: bool, extra: dict | None = None) -> None:
    if ws.fmt == "json":
        _emit({"result": value, **(extra or {})})
    else:
        print("true" if value else "false")


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_parse_term(ws, args):
    t = parse_term(args.term, args.n)
    if ws.fmt == "json":
        _emit(term_to_json(t))
    else:
        print(print_term(t))


def cmd_term_graph(ws, args):
    g = term_to_graph(parse_term(args.term, args.n), args.n)
    if ws.fmt == "json":
        _emit(g.to_json())
    else:
        _graph_text(g)


def _graph_text(g: LabeledGraph):
    print(f"vertices: {' '.join(map(str, g.vertices))}")
    print(f"labels: {g.n}")
    for u, v, i in g.sorted_edges():
        print(f"edge: {u} -a{i}- {v}")
    print(f"distinguished: {' '.join(map(str, g.distinguished))}")


def cmd_partition(ws, args):
    g = ws.graph(args.g)
    labels = [args.label] if args.label else range(1, g.n + 1)
    parts = {i: [list(b) for b in label_partition(g, i).blocks] for i in labels}
    if ws.fmt == "json":
        _emit({str(i): p for i, p in parts.items()})
    else:
        for i, p in parts.items():
            print(f"a{i}: " + " | ".join(" ".join(map(str, b)) for b in p))


def cmd_regular(ws, args):
    _bool(ws, is_regular(ws.graph(args.g)))


def cmd_k_constants(ws, args):
    ks = k_constants(ws.graph(args.g))
    if ws.fmt == "json":
        _emit(ks)
    else:
        print(" ".join(map(str, ks)))


def cmd_gen_malcev(ws, args):
    ids = generate(ws.graph(args.g), ws.graph(args.h))
    if args.simplify:
        ids = ids.simplified()
    if ws.fmt == "json":
        _emit(ids.to_json())
    elif ws.fmt == "latex":
        print(ids.to_latex())
    else:
        print(ids.to_text())


def _rels(ws, args, g):
    rels = [ws.relation(p) for p in args.rel]
    if len(rels) != g.n:
        raise UsageError(f"graph has {g.n} labels; pass exactly that many --rel files")
    return rels


def cmd_eval_relation(ws, args):
    g = ws.graph(args.g)
    rels = _rels(ws, args, g)
    if args.tuple:
        wit = connect(g, rels, args.tuple)
        if ws.fmt == "json":
            _emit({"connected": wit is not None, "witness": {str(k): v for k, v in (wit or {}).items()}})
        else:
            print("not connected" if wit is None else " ".join(f"{k}={v}" for k, v in wit.items()))
        return EXIT_OK if wit is not None else EXIT_FAIL
    tuples = relation(g, rels)
    if ws.fmt == "json":
        _emit([list(t) for t in tuples])
    else:
        for t in tuples:
            print(" ".join(map(str, t)))


def cmd_check_inclusion(ws, args):
    g, h = ws.graph(args.g), ws.graph(args.h)
    ok, bad = check_inclusion(g, h, _rels(ws, args, g))
    if ws.fmt == "json":
        _emit({"holds": ok, "counterexample": list(bad) if bad else None})
    else:
        print("holds" if ok else f"fails at {' '.join(map(str, bad))}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_congruences(ws, args):
    cons = alg_mod.congruences(ws.algebra(args.algebra))
    if ws.fmt == "json":
        _emit([r.to_json() for r in cons])
    else:
        for r in cons:
            print(" | ".join(" ".join(map(str, b)) for b in r.classes()))


def cmd_tolerances(ws, args):
    recs = alg_mod.tolerances(ws.algebra(args.algebra))
    if ws.fmt == "json":
        _emit([{**r.relation.to_json(), "class": r.kind} for r in recs])
    else:
        for r in recs:
            pairs = " ".join(f"{a}{b}" for a, b in r.relation.pairs() if a < b)
            print(f"{r.kind}: {{{pairs}}}")


def _caps(args) -> dict:
    return {"cap_power": args.cap_power, "cap_elements": args.cap_elements}


def cmd_free_algebra(ws, args):
    base = ws.algebra(args.algebra)
    fa = alg_mod.free_algebra(base, args.m, **_caps(args))
    if ws.fmt == "json":
        _emit(
            {
                "base": base.name,
                "m": args.m,
                "size": fa.size,
                "generators": list(fa.generators),
                "elements": fa.elements.tolist(),
                "terms": [fa.term_string(k) for k in range(fa.size)],
                "algebra": fa.algebra.to_json(),
            }
        )
    else:
        print(f"free algebra on {args.m} generators over {base.name or 'algebra'}: {fa.size} elements")
        for k in range(fa.size):
            print(f"{k}: {fa.term_string(k)}")


def _report(ws, rep) -> int:
    if ws.fmt == "json":
        _emit(rep.to_json())
    else:
        print(rep.to_text())
    return EXIT_OK if rep.passed else EXIT_FAIL


def _samples(ws, args):
    return [ws.algebra(s) for s in args.samples] if args.samples else None


def cmd_verify_wp(ws, args):
    alg = ws.algebra(args.algebra)
    return _report(ws, verify.check_wp(alg, ws.graph(args.g), ws.graph(args.h), _samples(ws, args), **_caps(args)))


def cmd_verify_contolnuo(ws, args):
    alg = ws.algebra(args.algebra)
    rep = verify.check_contolnuo(alg, _samples(ws, args), ws.graph(args.g), ws.graph(args.h), **_caps(args))
    return _report(ws, rep)


def cmd_verify_contolnuok(ws, args):
    alg = ws.algebra(args.algebra)
    rep = verify.check_contolnuok(alg, _samples(ws, args), ws.graph(args.g), ws.graph(args.h), **_caps(args))
    return _report(ws, rep)


def cmd_verify_cornuo(ws, args):
    alg = ws.algebra(args.algebra)
    rep = verify.check_cornuo(alg, ws.graph(args.g), ws.graph(args.h), args.m, _samples(ws, args), **_caps(args))
    return _report(ws, rep)


def cmd_realizable(ws, args):
    g = ws.graph(args.g)
    t = verify.realizing_term(g, args.max_size)
    extra = {"term": print_term(t) if t else None, "canonical_form": repr(canonical_form(g))}
    _bool(ws, t is not None, extra)


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "latex"), default="text")
    common.add_argument("--seed", type=int, help="accepted and ignored; every command is deterministic")

    caps = argparse.ArgumentParser(add_help=False)
    caps.add_argument("--cap-power", type=int, default=alg_mod.FREE_POWER_CAP, help="max coordinates s**m")
    caps.add_argument("--cap-elements", type=int, default=alg_mod.FREE_ELEMENT_CAP, help="max free algebra size")

    p = argparse.ArgumentParser(prog="graphmalcev", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_, parents=(common,)):
        sp = sub.add_parser(name, help=help_, parents=list(parents))
        sp.set_defaults(func=fn)
        return sp

    sp = add("parse-term", cmd_parse_term, "parse and pretty-print a term")
    sp.add_argument("term")
    sp.add_argument("--n", type=int, required=True)
    sp = add("term-graph", cmd_term_graph, "graph associated with a term")
    sp.add_argument("term")
    sp.add_argument("--n", type=int, required=True)
    sp = add("partition", cmd_partition, "classes of each label")
    sp.add_argument("--g", required=True)
    sp.add_argument("--label", type=int)
    add("regular", cmd_regular, "is every label class of size <= 2").add_argument("--g", required=True)
    add("k-constants", cmd_k_constants, "label exponents k_i").add_argument("--g", required=True)
    sp = add("gen-malcev", cmd_gen_malcev, "identities of the Mal'cev condition")
    sp.add_argument("--g", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--simplify", action="store_true", help="substitute forced projections (display only)")
    sp = add("eval-relation", cmd_eval_relation, "tuples connected by a graph")
    sp.add_argument("--g", required=True)
    sp.add_argument("--rel", nargs="+", required=True, help="relation JSON, one per label")
    sp.add_argument("--tuple", type=int, nargs="+", help="only connect this tuple and print the witness")
    sp = add("check-inclusion", cmd_check_inclusion, "G(R) subset of H(R) for given relations")
    sp.add_argument("--g", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--rel", nargs="+", required=True)
    add("congruences", cmd_congruences, "all congruences").add_argument("--algebra", required=True)
    add("tolerances", cmd_tolerances, "all tolerances, classified").add_argument("--algebra", required=True)
    sp = add("free-algebra", cmd_free_algebra, "free algebra on m generators", (common, caps))
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--m", type=int, required=True)
    for name, fn, help_ in (
        ("verify-wp", cmd_verify_wp, "congruence inclusion via the free algebra"),
        ("verify-contolnuo", cmd_verify_contolnuo, "regular graphs: congruences vs tolerances"),
        ("verify-contolnuok", cmd_verify_contolnuok, "any graph: tolerances with exponents k_i"),
        ("verify-cornuo", cmd_verify_cornuo, "regular graphs: alternating products of congruences"),
    ):
        sp = add(name, fn, help_, (common, caps))
        sp.add_argument("--algebra", required=True)
        sp.add_argument("--g", required=True)
        sp.add_argument("--h", required=True)
        sp.add_argument("--samples", nargs="+", help="sample algebras in the variety (default: A and A^2)")
        if name == "verify-cornuo":
            sp.add_argument("--m", type=int, nargs="+", default=[1, 3, 5])
    sp = add("realizable", cmd_realizable, "is the graph the graph of some term")
    sp.add_argument("--g", required=True)
    sp.add_argument("--max-size", type=int, default=8)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    ws = Workspace(fmt=args.format)
    if args.format == "latex" and args.command != "gen-malcev":
        print("--format latex is only available for gen-malcev", file=sys.stderr)
        return EXIT_USAGE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            code = args.func(ws, args)
    except (UsageError, ValueError, KeyError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if code is None else code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
