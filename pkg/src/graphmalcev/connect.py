"""Tuples connected by a labeled graph under a family of relations.

A tuple ``(a_1, ..., a_h)`` is connected by ``g`` when some map ``c`` from the
vertices into the universe sends ``d_k`` to ``a_k`` and every edge labeled
``i`` onto a pair of ``rels[i-1]``.
"""

from __future__ import annotations

import warnings
from typing import Sequence

import numpy as np

from . import kernels
from .graphs import LabeledGraph
from .relations import FinRelation, UniverseMismatch


class ConnectionInputError(ValueError):
    """Bad input to a connection query (shape, universe, relation kind)."""


def _stack(g: LabeledGraph, rels: Sequence[FinRelation]) -> np.ndarray:
    if len(rels) != g.n:
        raise ConnectionInputError(f"graph has {g.n} labels but {len(rels)} relations were given")
    size = rels[0].size
    for k, r in enumerate(rels):
        if r.size != size:
            raise UniverseMismatch("all relations must live on the same universe")
        if not (r.is_reflexive and r.is_symmetric):
            raise ConnectionInputError(f"relation {k + 1} must be reflexive and symmetric")
    if g.h == 1:
        warnings.warn("graph has a single distinguished vertex", stacklevel=3)
    return np.stack([r.matrix for r in rels])


def connect(g: LabeledGraph, rels: Sequence[FinRelation], tup: Sequence[int]) -> dict | None:
    """Witness map ``{vertex: element}`` connecting ``tup``, or None.

    The search is deterministic: distinguished vertices are fixed first,
    then the open vertex with fewest candidates is tried with values in
    ascending order.
    """
    mats = _stack(g, rels)
    if len(tup) != g.h:
        raise ConnectionInputError(f"tuple has length {len(tup)}, graph has {g.h} distinguished vertices")
    s = mats.shape[1]
    if any(not 0 <= a < s for a in tup):
        raise ConnectionInputError(f"tuple {tuple(tup)} leaves the universe 0..{s - 1}")
    indptr, nbr, lab = g.csr
    found, assign = kernels.connect(
        len(g.vertices), indptr, nbr, lab, mats, g.distinguished_index, np.asarray(tup, dtype=np.int64)
    )
    if not found:
        return None
    return {v: int(assign[k]) for k, v in enumerate(g.vertices)}


def relation_mask(g: LabeledGraph, rels: Sequence[FinRelation]) -> np.ndarray:
    """Boolean array of shape ``(s,)*h``: entry set iff the tuple is connected."""
    mats = _stack(g, rels)
    s = mats.shape[1]
    indptr, nbr, lab = g.csr
    flat = kernels.relation(len(g.vertices), indptr, nbr, lab, mats, g.distinguished_index)
    return flat.reshape((s,) * g.h)


def relation(g: LabeledGraph, rels: Sequence[FinRelation]) -> list[tuple[int, ...]]:
    mask = relation_mask(g, rels)
    return [tuple(int(x) for x in t) for t in np.argwhere(mask)]


def relation_as_binary(g: LabeledGraph, rels: Sequence[FinRelation]) -> FinRelation:
    if g.h != 2:
        raise ConnectionInputError("binary view needs exactly two distinguished vertices")
    return FinRelation(relation_mask(g, rels))


def check_inclusion(g: LabeledGraph, h: LabeledGraph, rels: Sequence[FinRelation]):
    """``(holds, counterexample)``; the counterexample is the least tuple
    connected by ``g`` but not by ``h``."""
    if g.n != h.n or g.h != h.h:
        raise ConnectionInputError("graphs differ in label count or number of distinguished vertices")
    gm = relation_mask(g, rels)
    hm = relation_mask(h, rels)
    bad = np.argwhere(gm & ~hm)
    if len(bad):
        return False, tuple(int(x) for x in bad[0])
    return True, None

