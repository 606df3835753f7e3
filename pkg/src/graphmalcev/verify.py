"""Desk-scale checks of the congruence / tolerance inclusion theorems.

The variety is always the one generated by a single finite algebra ``alg``;
statements about it are decided in the free algebra on ``|V(g)|``
generators.  Tolerance-side clauses are checked exhaustively on
caller-supplied sample algebras, which are assumed to lie in the variety.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import (
    FREE_ELEMENT_CAP,
    FREE_POWER_CAP,
    FiniteAlgebra,
    FreeAlgebraPresentation,
    congruences,
    free_algebra,
    generated_congruence,
    power,
    tolerances,
)
from .connect import check_inclusion, connect, relation_mask
from .graphs import GraphError, LabeledGraph, canonical_form, is_regular, k_constants, label_partition
from .malcev import generate, holds_in_algebra
from .relations import FinRelation, circ_m, compose
from .relations import power as rel_power
from .terms import Compose, Intersect, Term, Var

REALIZABLE_VERTEX_CAP = 8
REALIZABLE_SIZE_CAP = 8


@dataclass
class VerificationReport:
    theorem: str
    inputs: dict
    clauses: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)  # (description, ok)
    witnesses: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.assertions)

    def assert_(self, description: str, ok: bool):
        self.assertions.append((description, bool(ok)))

    def to_json(self) -> dict:
        return {
            "theorem": self.theorem,
            "inputs": self.inputs,
            "clauses": self.clauses,
            "assertions": [{"claim": d, "ok": ok} for d, ok in self.assertions],
            "witnesses": self.witnesses,
            "counterexamples": self.counterexamples,
            "passed": self.passed,
            "runtime": round(self.runtime, 6),
        }

    def to_text(self) -> str:
        lines = [f"theorem {self.theorem}: {'PASS' if self.passed else 'FAIL'}"]
        for k, v in self.inputs.items():
            lines.append(f"  input {k}: {v}")
        for k, v in self.clauses.items():
            lines.append(f"  clause {k}: {v}")
        for d, ok in self.assertions:
            lines.append(f"  [{'ok' if ok else 'FAILED'}] {d}")
        for k, v in self.counterexamples.items():
            lines.append(f"  counterexample {k}: {v}")
        for k, v in self.witnesses.items():
            lines.append(f"  witness {k}: {v}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# congruence inclusions via the free algebra
# --------------------------------------------------------------------------


@dataclass
class FreeAlgebraWitness:
    free: FreeAlgebraPresentation
    alphas: list  # generated congruences, one per label
    tuple: tuple  # generator indices of the distinguished vertices of g
    connection: dict | None  # vertex of h -> element index of the free algebra


def _check_shapes(g: LabeledGraph, h: LabeledGraph):
    if g.n != h.n or g.h != h.h:
        raise GraphError("graphs differ in label count or number of distinguished vertices")


def variety_satisfies_congruence_inclusion(
    alg: FiniteAlgebra,
    g: LabeledGraph,
    h: LabeledGraph,
    cap_power: int = FREE_POWER_CAP,
    cap_elements: int = FREE_ELEMENT_CAP,
) -> tuple[bool, FreeAlgebraWitness]:
    """Decide whether the variety of ``alg`` satisfies ``g <= h`` for congruences.

    In the free algebra on the vertices of ``g``, take for each label the
    congruence generated by that label's classes, and ask whether ``h``
    connects the generators sitting at the distinguished vertices.
    """
    _check_shapes(g, h)
    free = free_algebra(alg, len(g.vertices), cap_power, cap_elements)
    gen = {v: free.generators[k] for k, v in enumerate(g.vertices)}
    alphas = []
    for i in range(1, g.n + 1):
        pairs = [(gen[b[0]], gen[v]) for b in label_partition(g, i).blocks for v in b[1:]]
        alphas.append(generated_congruence(free.algebra, pairs))
    tup = tuple(gen[d] for d in g.distinguished)
    wit = connect(h, alphas, tup)
    return wit is not None, FreeAlgebraWitness(free, alphas, tup, wit)


def extract_malcev_terms(
    alg: FiniteAlgebra,
    g: LabeledGraph,
    h: LabeledGraph,
    target: FiniteAlgebra | None = None,
    witness: FreeAlgebraWitness | None = None,
) -> dict | None:
    """Operation tables for the symbols ``t_w``, read off the connection in the
    free algebra; evaluated in ``target`` (default ``alg``), which must share
    the signature.  None when the inclusion fails."""
    if witness is None:
        _, witness = variety_satisfies_congruence_inclusion(alg, g, h)
    if witness.connection is None:
        return None
    ids = generate(g, h)
    sym = dict(ids.symbol_of)
    target = target or alg
    return {sym[w]: witness.free.term_operation(k, target) for w, k in witness.connection.items()}


def witness_terms(g: LabeledGraph, h: LabeledGraph, witness: FreeAlgebraWitness) -> dict | None:
    if witness.connection is None:
        return None
    ids = generate(g, h)
    sym = dict(ids.symbol_of)
    names = list(ids.variables)
    return {sym[w]: witness.free.term_string(k, names) for w, k in witness.connection.items()}


# --------------------------------------------------------------------------
# exhaustive inclusion checks on sample algebras
# --------------------------------------------------------------------------


def _default_samples(alg: FiniteAlgebra, samples):
    return list(samples) if samples else [alg, power(alg, 2)]


def _first_failure(g, h, tuples, transform_g=None, transform_h=None):
    """Scan relation tuples; return None or (relations, counterexample tuple)."""
    for rels in tuples:
        rg = transform_g(rels) if transform_g else rels
        rh = transform_h(rels) if transform_h else rels
        if rg is rh:
            ok, bad = check_inclusion(g, h, rg)
        else:
            ok, bad = _check_split(g, h, rg, rh)
        if not ok:
            return rels, bad
    return None


def _check_split(g, h, rg, rh):
    bad = np.argwhere(relation_mask(g, rg) & ~relation_mask(h, rh))
    if len(bad):
        return False, tuple(int(x) for x in bad[0])
    return True, None


def _relation_json(r: FinRelation):
    if r.is_equivalence:
        return {"classes": r.classes()}
    return {"pairs": [list(p) for p in r.pairs()]}


def _describe(sample: FiniteAlgebra, failure) -> dict:
    rels, tup = failure
    return {
        "algebra": sample.name or f"size-{sample.size}",
        "relations": [_relation_json(r) for r in rels],
        "tuple": list(tup),
    }


def _variety_verdict(rep: VerificationReport, key: str, alg, g, h, caps) -> tuple[bool, FreeAlgebraWitness]:
    """Record the free-algebra verdict under ``key``; a failure carries the
    generated congruences and the generator tuple as its counterexample."""
    holds, wit = variety_satisfies_congruence_inclusion(alg, g, h, **caps)
    rep.clauses[key] = holds
    if not holds:
        rep.counterexamples[key] = _describe(wit.free.algebra, (wit.alphas, wit.tuple))
    return holds, wit


def _sample_name(sample: FiniteAlgebra, k: int) -> str:
    return sample.name or f"sample{k}"


def _records(sample):
    recs = tolerances(sample)
    return {
        "congruence": [r.relation for r in recs if r.is_congruence],
        "representable": [r.relation for r in recs if r.is_representable],
        "weak": [r.relation for r in recs if r.is_weakly_representable],
        "all": [r.relation for r in recs],
    }


def check_contolnuo(alg, samples, g: LabeledGraph, h: LabeledGraph, **caps) -> VerificationReport:
    """Regular ``g``: congruence inclusion versus its tolerance forms."""
    _check_shapes(g, h)
    if not is_regular(g):
        raise GraphError("g must be regular (every label class has at most two vertices)")
    t0 = time.perf_counter()
    samples = _default_samples(alg, samples)
    rep = VerificationReport("contolnuo", {"algebra": alg.name, "samples": [s.name for s in samples]})
    holds, _ = _variety_verdict(rep, "variety:i", alg, g, h, caps)
    n = g.n
    for k, sample in enumerate(samples):
        name = _sample_name(sample, k)
        recs = _records(sample)
        squares = {r: compose(r, r) for r in recs["all"]}
        checks = {
            "i": _first_failure(g, h, product(recs["congruence"], repeat=n)),
            "ii": _first_failure(g, h, product(recs["representable"], repeat=n)),
            "iii": _first_failure(g, h, product(recs["weak"], repeat=n)),
            "iv": _first_failure(g, h, (tuple(squares[r] for r in t) for t in product(recs["all"], repeat=n))),
        }
        verdict = {c: f is None for c, f in checks.items()}
        for c, f in checks.items():
            rep.clauses[f"{name}:{c}"] = verdict[c]
            if f is not None:
                rep.counterexamples[f"{name}:{c}"] = _describe(sample, f)
        if holds:
            for c in ("i", "ii", "iii", "iv"):
                rep.assert_(f"variety (i) implies ({c}) on {name}", verdict[c])
        rep.assert_(f"(iv) implies (i) on {name}", not verdict["iv"] or verdict["i"])
        rep.assert_(f"(ii) implies (i) on {name}", not verdict["ii"] or verdict["i"])
        rep.assert_(f"(iii) implies (ii) on {name}", not verdict["iii"] or verdict["ii"])
    rep.runtime = time.perf_counter() - t0
    return rep


def check_contolnuok(alg, samples, g: LabeledGraph, h: LabeledGraph, **caps) -> VerificationReport:
    """Any finite ``g``: tolerance inclusion with the right side raised to the
    label exponents ``k_i`` (clamped to at least 1)."""
    _check_shapes(g, h)
    t0 = time.perf_counter()
    samples = _default_samples(alg, samples)
    ks = [max(1, k) for k in k_constants(g)]
    rep = VerificationReport(
        "contolnuok", {"algebra": alg.name, "samples": [s.name for s in samples], "exponents": ks}
    )
    holds, _ = _variety_verdict(rep, "variety:i", alg, g, h, caps)
    for k, sample in enumerate(samples):
        name = _sample_name(sample, k)
        recs = _records(sample)
        powers = {r: tuple(rel_power(r, e) for e in ks) for r in recs["all"]}

        def raise_(rels):
            return [powers[r][j] for j, r in enumerate(rels)]

        cong = _first_failure(g, h, product(recs["congruence"], repeat=g.n))
        tol = _first_failure(g, h, product(recs["all"], repeat=g.n), transform_h=raise_)
        rep.clauses[f"{name}:i"] = cong is None
        rep.clauses[f"{name}:ii"] = tol is None
        for c, f in (("i", cong), ("ii", tol)):
            if f is not None:
                rep.counterexamples[f"{name}:{c}"] = _describe(sample, f)
        if holds:
            rep.assert_(f"variety (i) implies (ii) on {name}", tol is None)
    rep.runtime = time.perf_counter() - t0
    return rep


def check_cornuo(
    alg, g: LabeledGraph, h: LabeledGraph, m_values: Sequence[int], samples=None, **caps
) -> VerificationReport:
    """Regular ``g``: congruence inclusion versus ``beta o_m gamma`` forms.

    The verdict for each odd ``m`` combines the free algebra (with the
    generated congruences as ``beta`` and ``gamma`` in ``{Delta, beta}``) and
    every congruence pair tuple of every sample.
    """
    _check_shapes(g, h)
    m_values = list(m_values)
    if not m_values or any(m < 1 or m % 2 == 0 for m in m_values):
        raise ValueError(f"m values must be odd and >= 1, got {m_values}")
    if not is_regular(g):
        raise GraphError("g must be regular (every label class has at most two vertices)")
    t0 = time.perf_counter()
    samples = _default_samples(alg, samples)
    rep = VerificationReport(
        "cornuo", {"algebra": alg.name, "samples": [s.name for s in samples], "m": m_values}
    )
    holds, wit = _variety_verdict(rep, "variety:i", alg, g, h, caps)
    free = wit.free.algebra
    delta = FinRelation.diagonal(free.size)
    free_pairs = [((a, delta), (a, a)) for a in wit.alphas]

    sample_pairs = []
    for sample in samples:
        cons = congruences(sample)
        sample_pairs.append([(b, c) for b in cons for c in cons])

    def verdict(op):
        failures = {}
        for choice in product(*free_pairs):
            f = _first_failure(g, h, [[op(b, c) for b, c in choice]])
            if f is not None:
                failures["free"] = _describe(free, f)
                break
        for k, (sample, pairs) in enumerate(zip(samples, sample_pairs)):
            f = _first_failure(g, h, ([op(b, c) for b, c in t] for t in product(pairs, repeat=g.n)))
            if f is not None:
                failures[_sample_name(sample, k)] = _describe(sample, f)
        return not failures, failures

    ok2, fail2 = verdict(lambda b, c: compose(compose(b, c), b))
    rep.clauses["ii"] = ok2
    for key, f in fail2.items():
        rep.counterexamples[f"ii:{key}"] = f
    results = {}
    for m in m_values:
        ok, fails = verdict(lambda b, c, m=m: circ_m(b, c, m))
        results[m] = ok
        rep.clauses[f"iii:m={m}"] = ok
        for key, f in fails.items():
            rep.counterexamples[f"iii:m={m}:{key}"] = f
    rep.assert_("verdicts agree for every supplied odd m", len(set(results.values())) == 1)
    if 3 in results:
        rep.assert_("m = 3 agrees with clause (ii)", results[3] == ok2)
    if holds:
        rep.assert_("variety (i) implies (ii)", ok2)
        for m, ok in results.items():
            rep.assert_(f"variety (i) implies (iii) for m = {m}", ok)
    rep.runtime = time.perf_counter() - t0
    return rep


def check_wp(alg, g: LabeledGraph, h: LabeledGraph, samples=None, **caps) -> VerificationReport:
    """Free-algebra verdict, extracted terms, and soundness on samples."""
    _check_shapes(g, h)
    t0 = time.perf_counter()
    samples = _default_samples(alg, samples)
    rep = VerificationReport("WP", {"algebra": alg.name, "samples": [s.name for s in samples]})
    holds, wit = _variety_verdict(rep, "ii:free-algebra", alg, g, h, caps)
    rep.inputs["free_algebra_size"] = wit.free.size
    ids = generate(g, h)
    if holds:
        rep.witnesses["terms"] = witness_terms(g, h, wit)
        targets = samples if any(x is alg for x in samples) else [alg] + samples
        for k, sample in enumerate(targets):
            name = _sample_name(sample, k)
            terms = extract_malcev_terms(alg, g, h, target=sample, witness=wit)
            ok = holds_in_algebra(ids, sample, terms)
            rep.clauses[f"iii:{name}"] = ok
            rep.assert_(f"extracted terms satisfy the Mal'cev identities in {name}", ok)
        rep.witnesses["tables"] = {
            s: t.tolist() for s, t in extract_malcev_terms(alg, g, h, witness=wit).items()
        }
    for k, sample in enumerate(samples):
        name = _sample_name(sample, k)
        if sample.size > 8:
            continue
        f = _first_failure(g, h, product(congruences(sample), repeat=g.n))
        rep.clauses[f"i:{name}"] = f is None
        if f is not None:
            rep.counterexamples[f"i:{name}"] = _describe(sample, f)
        if holds:
            rep.assert_(f"free-algebra verdict implies the inclusion on {name}", f is None)
    if not holds:
        rep.assert_("no connection exists in the free algebra", wit.connection is None)
    rep.runtime = time.perf_counter() - t0
    return rep


# --------------------------------------------------------------------------
# term realizability
# --------------------------------------------------------------------------


def _glue(a, b, parallel: bool):
    (na, ea, a1, a2), (nb, eb, b1, b2) = a, b
    glue = {b1: a1, b2: a2} if parallel else {b1: a2}
    mapping = {}
    nxt = na
    for v in range(nb):
        if v in glue:
            mapping[v] = glue[v]
        else:
            mapping[v] = nxt
            nxt += 1
    edges = set(ea)
    for u, v, i in eb:
        x, y = mapping[u], mapping[v]
        edges.add((min(x, y), max(x, y), i))
    return nxt, frozenset(edges), a1, (a2 if parallel else mapping[b2])


def realizing_term(g: LabeledGraph, max_term_size: int) -> Term | None:
    """Smallest term (by variable occurrences, at most ``max_term_size``) whose
    graph is isomorphic to ``g``, or None.

    Works over isomorphism classes: the graph of a composite term depends only
    on the classes of its parts, and vertex and edge counts never shrink, so
    parts larger than ``g`` are discarded.
    """
    if len(g.vertices) > REALIZABLE_VERTEX_CAP:
        raise GraphError(f"realizability check supports at most {REALIZABLE_VERTEX_CAP} vertices")
    if max_term_size > REALIZABLE_SIZE_CAP:
        raise GraphError(f"term size bound is capped at {REALIZABLE_SIZE_CAP}")
    if g.h != 2:
        return None
    target = canonical_form(g)
    nv, ne = len(g.vertices), len(g.edges)
    labels = sorted({i for _, _, i in g.edges})

    def canon(shape):
        k, edges, d1, d2 = shape
        return canonical_form(LabeledGraph(range(k), g.n, edges, (d1, d2)))

    seen: set = set()
    by_size: dict[int, list] = {}
    for size in range(1, max_term_size + 1):
        layer = []
        if size == 1:
            cands = (((2, frozenset({(0, 1, i)}), 0, 1), Var(i)) for i in labels)
        else:
            cands = (
                (_glue(sa, sb, par), (Intersect if par else Compose)(ta, tb))
                for k in range(1, size)
                for sa, ta in by_size.get(k, [])
                for sb, tb in by_size.get(size - k, [])
                for par in (False, True)
            )
        for shape, term in cands:
            if shape[0] > nv or len(shape[1]) > ne:
                continue
            key = canon(shape)
            if key in seen:
                continue
            seen.add(key)
            if key == target:
                return term
            layer.append((shape, term))
        by_size[size] = layer
    return None


def term_realizability(g: LabeledGraph, max_term_size: int) -> bool:
    return realizing_term(g, max_term_size) is not None
