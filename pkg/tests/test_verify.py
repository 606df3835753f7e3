import pytest

from graphmalcev import algebra as A
from graphmalcev import verify
from graphmalcev.fixtures import k4, path4, perm_g, perm_h
from graphmalcev.graphs import GraphError, LabeledGraph, canonical_form
from graphmalcev.malcev import generate, holds_in_algebra
from graphmalcev.terms import parse_term, term_to_graph


def test_z2_permutes_and_terms_satisfy_identities(perm_g, perm_h):
    ok, wit = verify.variety_satisfies_congruence_inclusion(A.z2(), perm_g, perm_h)
    assert ok and wit.connection is not None
    ids = generate(perm_g, perm_h)
    for target in (A.z2(), A.power(A.z2(), 2)):
        terms = verify.extract_malcev_terms(A.z2(), perm_g, perm_h, target=target, witness=wit)
        assert holds_in_algebra(ids, target, terms)


def test_chain2_does_not_permute(perm_g, perm_h):
    ok, wit = verify.variety_satisfies_congruence_inclusion(A.chain(2), perm_g, perm_h)
    assert not ok and wit.connection is None
    assert verify.extract_malcev_terms(A.chain(2), perm_g, perm_h) is None


def test_reverse_inclusion_is_symmetric_case(perm_g):
    # a1 o a2 is contained in itself in every variety
    ok, _ = verify.variety_satisfies_congruence_inclusion(A.chain(2), perm_g, perm_g)
    assert ok


def test_meet_inclusion_in_distributive_case():
    # a1 & (a2 o a3) <= (a1 & a2) o (a1 & a3) characterises congruence
    # distributivity at this level; lattices satisfy it, Z2 does not
    h = term_to_graph(parse_term("(a1 & a2) o (a1 & a3)", 3), 3)
    g = term_to_graph(parse_term("a1 & (a2 o a3)", 3), 3)
    assert verify.variety_satisfies_congruence_inclusion(A.chain(2), g, h, cap_power=4096)[0]
    assert not verify.variety_satisfies_congruence_inclusion(A.z2(), g, h)[0]


@pytest.mark.parametrize("alg", [A.z2(), A.chain(2)], ids=lambda a: a.name)
def test_reports_pass(alg, perm_g, perm_h):
    for rep in (
        verify.check_wp(alg, perm_g, perm_h),
        verify.check_contolnuo(alg, None, perm_g, perm_h),
        verify.check_contolnuok(alg, None, perm_g, perm_h),
        verify.check_cornuo(alg, perm_g, perm_h, [1, 3, 5]),
    ):
        assert rep.passed, rep.to_text()
        assert rep.to_json()["passed"]


def test_regularity_required():
    with pytest.raises(GraphError):
        verify.check_contolnuo(A.z2(), None, k4(), k4())
    with pytest.raises(ValueError):
        verify.check_cornuo(A.z2(), perm_g(), perm_h(), [2])


def test_contolnuok_exponents_for_path():
    g, h = path4(), LabeledGraph([0, 1], 1, [(0, 1, 1)], [0, 1])
    rep = verify.check_contolnuok(A.z2(), None, g, h)
    assert rep.inputs["exponents"] == [4]
    assert rep.passed


def test_realizability():
    t = verify.realizing_term(perm_g(), 2)
    assert t is not None
    assert canonical_form(term_to_graph(t, 2)) == canonical_form(perm_g())
    assert verify.realizing_term(k4(), 5) is None
    # relabelled term graphs are found again
    src = term_to_graph(parse_term("(a1 o a2) & a2 o a1", 2), 2)
    assert verify.term_realizability(src.relabel({v: 10 - v for v in src.vertices}), 4)


def test_extracted_malcev_table_is_x_plus_y_plus_z(perm_g, perm_h):
    terms = verify.extract_malcev_terms(A.z2(), perm_g, perm_h)
    expect = [(x + y + z) % 2 for x in range(2) for y in range(2) for z in range(2)]
    assert list(terms["t_w1"]) == expect


def test_edge_graph_terms_are_projections():
    e = LabeledGraph([0, 1], 1, [(0, 1, 1)], [0, 1])
    terms = verify.extract_malcev_terms(A.chain(2), e, e)
    assert list(terms["t_w0"]) == [0, 0, 1, 1] and list(terms["t_w1"]) == [0, 1, 0, 1]


def test_non_permutable_report_with_chain3_sample(perm_g, perm_h):
    rep = verify.check_contolnuo(A.chain(2), [A.chain(2), A.chain(3)], perm_g, perm_h)
    assert rep.clauses["variety:i"] is False
    assert rep.clauses["chain3:i"] is False
    assert rep.passed


def _failing_clauses_have_counterexamples(rep):
    for clause, ok in rep.clauses.items():
        if ok is False:
            assert any(k == clause or k.startswith(clause + ":") for k in rep.counterexamples), clause
            for k, c in rep.counterexamples.items():
                assert {"algebra", "relations", "tuple"} <= set(c)


@pytest.mark.parametrize("alg", [A.z2(), A.chain(2)], ids=lambda a: a.name)
def test_failures_carry_counterexamples(alg, perm_g, perm_h):
    samples = [alg, A.chain(3)] if alg.name == "chain2" else None
    for rep in (
        verify.check_wp(alg, perm_g, perm_h, samples),
        verify.check_contolnuo(alg, samples, perm_g, perm_h),
        verify.check_contolnuok(alg, samples, perm_g, perm_h),
        verify.check_cornuo(alg, perm_g, perm_h, [1, 3], samples),
    ):
        _failing_clauses_have_counterexamples(rep)
