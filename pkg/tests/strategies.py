"""Hypothesis strategies for graphs, relations and terms."""

from hypothesis import strategies as st

from graphmalcev.graphs import LabeledGraph
from graphmalcev.relations import FinRelation
from graphmalcev.terms import Compose, Intersect, Var


@st.composite
def graphs(draw, max_vertices=6, max_labels=3, max_h=3, n=None, h=None, loops=True):
    nv = draw(st.integers(1, max_vertices))
    n = n or draw(st.integers(1, max_labels))
    pairs = st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1), st.integers(1, n))
    edges = draw(st.lists(pairs, max_size=2 * nv))
    if not loops:
        edges = [e for e in edges if e[0] != e[1]]
    h = h or draw(st.integers(1, max_h))
    dist = draw(st.lists(st.integers(0, nv - 1), min_size=h, max_size=h))
    return LabeledGraph(range(nv), n, edges, dist)


@st.composite
def regular_graphs(draw, max_vertices=8, max_labels=3):
    nv = draw(st.integers(1, max_vertices))
    n = draw(st.integers(1, max_labels))
    edges = []
    for i in range(1, n + 1):
        order = draw(st.permutations(range(nv)))
        cuts = draw(st.lists(st.booleans(), min_size=nv, max_size=nv))
        k = 0
        while k < nv:
            if k + 1 < nv and cuts[k]:
                edges.append((order[k], order[k + 1], i))
                k += 2
            else:
                k += 1
    dist = draw(st.lists(st.integers(0, nv - 1), min_size=1, max_size=3))
    return LabeledGraph(range(nv), n, edges, dist)


@st.composite
def relations(draw, size, reflexive=False, symmetric=False):
    pairs = draw(st.lists(st.tuples(st.integers(0, size - 1), st.integers(0, size - 1)), max_size=size * size))
    return FinRelation.from_pairs(size, pairs, diagonal=reflexive, symmetric=symmetric)


def terms(n, max_leaves=8):
    leaf = st.integers(1, n).map(Var)
    return st.recursive(
        leaf,
        lambda sub: st.builds(Compose, sub, sub) | st.builds(Intersect, sub, sub),
        max_leaves=max_leaves,
    )
