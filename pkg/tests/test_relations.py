import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from graphmalcev.relations import (
    FinRelation,
    UniverseMismatch,
    circ_m,
    compose,
    converse,
    intersect,
    power,
    union_rel,
)
from strategies import relations

size = st.integers(1, 5)


@st.composite
def two_relations(draw):
    s = draw(size)
    return draw(relations(s)), draw(relations(s))


@given(two_relations())
def test_compose_matches_pair_oracle(rt):
    r, t = rt
    assert compose(r, t) == oracles.compose(r, t)
    assert r @ t == compose(r, t)


@given(two_relations())
def test_converse_reverses_products(rt):
    r, t = rt
    assert converse(compose(r, t)) == compose(converse(t), converse(r))
    assert converse(converse(r)) == r


@given(two_relations())
def test_meet_and_join(rt):
    r, t = rt
    assert intersect(r, t) == FinRelation.from_pairs(r.size, set(r.pairs()) & set(t.pairs()))
    assert union_rel(r, t) == FinRelation.from_pairs(r.size, set(r.pairs()) | set(t.pairs()))
    assert intersect(r, t) <= r <= union_rel(r, t)


@given(size.flatmap(lambda s: relations(s, reflexive=True)), st.integers(1, 4))
def test_powers_of_reflexive_relation_grow(r, k):
    assert power(r, k) <= power(r, k + 1)
    expect = r
    for _ in range(k - 1):
        expect = oracles.compose(expect, r)
    assert power(r, k) == expect


def test_power_needs_positive_exponent():
    with pytest.raises(ValueError):
        power(FinRelation.diagonal(2), 0)


@given(two_relations(), st.sampled_from([1, 3, 5]))
def test_alternating_product(rt, m):
    b, c = rt
    expect = b
    for j in range(1, m):
        expect = compose(expect, c if j % 2 else b)
    assert circ_m(b, c, m) == expect


def test_alternating_product_rejects_even():
    d = FinRelation.diagonal(2)
    with pytest.raises(ValueError):
        circ_m(d, d, 2)


def test_size_mismatch():
    with pytest.raises(UniverseMismatch):
        compose(FinRelation.diagonal(2), FinRelation.diagonal(3))


@given(size.flatmap(lambda s: relations(s)))
def test_json_round_trip(r):
    assert FinRelation.from_json(r.to_json()) == r
    assert hash(FinRelation.from_json(r.to_json())) == hash(r)


def test_partition_classes():
    r = FinRelation.from_partition([0, 1, 0, 2])
    assert r.is_equivalence
    assert r.classes() == [[0, 2], [1], [3]]


def test_properties():
    r = FinRelation.from_pairs(3, [(0, 1)], diagonal=True, symmetric=True)
    assert r.is_reflexive and r.is_symmetric and r.is_transitive
    t = FinRelation.from_pairs(3, [(0, 1), (1, 2)], diagonal=True, symmetric=True)
    assert not t.is_transitive
    assert power(t, 2) == FinRelation.full(3)


def test_matrix_is_read_only():
    r = FinRelation.diagonal(2)
    with pytest.raises(ValueError):
        r.matrix[0, 1] = True
    assert np.array_equal(r.matrix, np.eye(2, dtype=bool))
