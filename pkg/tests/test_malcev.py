import itertools

import numpy as np
import pytest
from hypothesis import given

from graphmalcev import algebra as A
from graphmalcev.fixtures import perm_g, perm_h
from graphmalcev.graphs import GraphError, LabeledGraph
from graphmalcev.malcev import App, Identity, IdentitySet, V, equivalent_mod_renaming, generate, holds_in_algebra
from strategies import graphs

pair_graphs = graphs(max_vertices=5, max_labels=2, h=2).flatmap(
    lambda g: graphs(max_vertices=4, n=g.n, h=g.h).map(lambda h: (g, h))
)

MALCEV = IdentitySet(
    ("t",),
    3,
    ("x", "y", "z"),
    (
        Identity(App("t", ("x", "y", "y")), V("x")),
        Identity(App("t", ("x", "x", "z")), V("z")),
    ),
)


def test_permutability_gives_malcev_term():
    ids = generate(perm_g(), perm_h())
    assert len(ids) == 4
    assert equivalent_mod_renaming(ids.simplified(), MALCEV)


def test_renaming_check_rejects_other_conditions():
    other = IdentitySet(
        ("t",),
        3,
        ("x", "y", "z"),
        (Identity(App("t", ("x", "y", "y")), V("x")), Identity(App("t", ("x", "x", "z")), V("x"))),
    )
    assert not equivalent_mod_renaming(other, MALCEV)


@given(pair_graphs)
def test_identity_count(gh):
    g, h = gh
    loops = sum(1 for u, v, _ in h.edges if u == v)
    assert len(generate(g, h)) == h.h + len(h.edges) - loops


@given(pair_graphs)
def test_representative_choice_is_irrelevant(gh):
    g, h = gh
    assert equivalent_mod_renaming(generate(g, h, "min"), generate(g, h, "max"))


@given(pair_graphs)
def test_json_round_trip(gh):
    ids = generate(*gh)
    back = IdentitySet.from_json(ids.to_json())
    assert back.identities == ids.identities and back.symbols == ids.symbols


def test_shape_mismatch():
    g = LabeledGraph([0, 1], 1, [(0, 1, 1)], [0, 1])
    with pytest.raises(GraphError):
        generate(g, perm_h())


def _maltsev_z2():
    # x - y + z over Z2
    return np.array([[[(x + y + z) % 2 for z in range(2)] for y in range(2)] for x in range(2)])


def test_holds_in_z2():
    assert holds_in_algebra(MALCEV, A.z2(), {"t": _maltsev_z2()})


def test_no_malcev_term_on_chain2():
    for bits in itertools.product((0, 1), repeat=8):
        assert not holds_in_algebra(MALCEV, A.chain(2), {"t": bits}) or not _monotone(bits)


def _monotone(bits):
    tab = np.array(bits).reshape(2, 2, 2)
    pts = list(itertools.product((0, 1), repeat=3))
    return all(tab[p] <= tab[q] for p in pts for q in pts if all(a <= b for a, b in zip(p, q)))


def test_latex_and_text():
    ids = generate(perm_g(), perm_h())
    assert ids.to_text().count("\n") == 3
    assert ids.to_latex().startswith("\\begin{align*}")
