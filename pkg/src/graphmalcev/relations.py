"""Binary relations on a finite set {0, ..., s-1}.

A :class:`FinRelation` wraps a read-only boolean ``s x s`` matrix.  Values are
immutable and hashable, so they can be put in sets and used as dict keys.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable

import numpy as np

from . import kernels



class UniverseMismatch(ValueError):
    pass


class FinRelation:
    def __init__(self, matrix):
        m = np.array(matrix, dtype=np.bool_)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"relation matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        self.matrix = m

    # construction -------------------------------------------------------

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable, diagonal: bool = False, symmetric: bool = False):
        m = np.zeros((size, size), dtype=np.bool_)
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise ValueError(f"pair ({a}, {b}) outside universe of size {size}")
            m[a, b] = True
            if symmetric:
                m[b, a] = True
        if diagonal:
            np.fill_diagonal(m, True)
        return cls(m)

    @classmethod
    def from_partition(cls, labels):
        labels = np.asarray(labels)
        return cls(labels[:, None] == labels[None, :])

    @classmethod
    def diagonal(cls, size: int):
        return cls(np.eye(size, dtype=np.bool_))

    @classmethod
    def full(cls, size: int):
        return cls(np.ones((size, size), dtype=np.bool_))

    # queries -------------------------------------------------------------

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.matrix))]

    def __contains__(self, pair) -> bool:
        a, b = pair
        return bool(self.matrix[a, b])

    def __len__(self) -> int:
        return int(self.matrix.sum())

    @cached_property
    def is_reflexive(self) -> bool:
        return bool(self.matrix.diagonal().all())

    @cached_property
    def is_symmetric(self) -> bool:
        return bool((self.matrix == self.matrix.T).all())

    @cached_property
    def is_transitive(self) -> bool:
        return bool(not (kernels.compose(self.matrix, self.matrix) & ~self.matrix).any())

    @property
    def is_equivalence(self) -> bool:
        return self.is_reflexive and self.is_symmetric and self.is_transitive

    def classes(self) -> list[list[int]]:
        """Blocks of an equivalence relation, ordered by least element."""
        if not self.is_equivalence:
            raise ValueError("classes() requires an equivalence relation")
        seen = np.zeros(self.size, dtype=np.bool_)
        out = []
        for a in range(self.size):
            if not seen[a]:
                block = np.nonzero(self.matrix[a])[0]
                seen[block] = True
                out.append([int(x) for x in block])
        return out

    def issubset(self, other: "FinRelation") -> bool:
        _check_same(self, other)
        return bool(not (self.matrix & ~other.matrix).any())

    __le__ = issubset

    def sort_key(self):
        return (len(self), np.packbits(self.matrix).tobytes())

    # dunder plumbing ---------------------------------------------------

    @cached_property
    def _key(self):
        return (self.size, np.packbits(self.matrix).tobytes())

    def __eq__(self, other):
        if not isinstance(other, FinRelation):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __and__(self, other):
        return intersect(self, other)

    def __or__(self, other):
        return union_rel(self, other)

    def __matmul__(self, other):
        return compose(self, other)

    def __repr__(self):
        return f"FinRelation(size={self.size}, pairs={self.pairs()})"

    def to_json(self) -> dict:
        return {"size": self.size, "pairs": [list(p) for p in self.pairs()]}

    @classmethod
    def from_json(cls, data: dict):
        return cls.from_pairs(int(data["size"]), data.get("pairs", []), diagonal=bool(data.get("diagonal", False)))


def _check_same(r: FinRelation, t: FinRelation):
    if r.size != t.size:
        raise UniverseMismatch(f"universe sizes differ: {r.size} vs {t.size}")


def compose(r: FinRelation, t: FinRelation) -> FinRelation:
    """``(a, c)`` is related iff some ``b`` has ``(a, b)`` in r and ``(b, c)`` in t."""
    _check_same(r, t)
    return FinRelation(kernels.compose(r.matrix, t.matrix))


def converse(r: FinRelation) -> FinRelation:
    return FinRelation(r.matrix.T)


def intersect(r: FinRelation, t: FinRelation) -> FinRelation:
    _check_same(r, t)
    return FinRelation(r.matrix & t.matrix)


def union_rel(r: FinRelation, t: FinRelation) -> FinRelation:
    _check_same(r, t)
    return FinRelation(r.matrix | t.matrix)


def power(r: FinRelation, k: int) -> FinRelation:
    """r composed with itself, k factors in total."""
    if k < 1:
        raise ValueError(f"power needs k >= 1, got {k}")
    out = r
    for _ in range(k - 1):
        out = compose(out, r)
    return out


def circ_m(b: FinRelation, c: FinRelation, m: int) -> FinRelation:
    """Alternating product b o c o b o ... with m factors (m odd)."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"circ_m needs an odd m >= 1, got {m}")
    _check_same(b, c)
    out = b
    for step in range(1, m):
        out = compose(out, c if step % 2 else b)
    return out
