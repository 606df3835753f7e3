"""Finite algebras, their congruences and tolerances, and free algebras of the
variety they generate."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .relations import FinRelation, compose, converse

CONGRUENCE_SIZE_CAP = 8
TOLERANCE_SIZE_CAP = 6
REFLEXIVE_COUNT_CAP = 200_000
FREE_POWER_CAP = 4096
FREE_ELEMENT_CAP = 100_000


class CapExceeded(RuntimeError):
    pass


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Operation:
    name: str
    arity: int
    table: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """Universe ``{0..size-1}`` with operation tables stored row-major."""

    size: int
    ops: tuple
    name: str = ""

    def __post_init__(self):
        if self.size < 1:
            raise AlgebraError("universe must be non-empty")
        ops = []
        for op in self.ops:
            if isinstance(op, Operation):
                name, arity, table = op.name, op.arity, op.table
            else:
                name, arity, table = op
            t = np.asarray(table, dtype=np.int64).ravel().copy()
            if t.size != self.size**arity:
                raise AlgebraError(f"operation {name!r} of arity {arity} needs {self.size**arity} entries, got {t.size}")
            if t.size and (t.min() < 0 or t.max() >= self.size):
                raise AlgebraError(f"operation {name!r} has values outside the universe")
            t.setflags(write=False)
            ops.append(Operation(str(name), int(arity), t))
        object.__setattr__(self, "ops", tuple(ops))

    def op(self, name: str) -> Operation:
        for o in self.ops:
            if o.name == name:
                return o
        raise KeyError(name)

    def apply(self, name: str, *args: int) -> int:
        o = self.op(name)
        if len(args) != o.arity:
            raise AlgebraError(f"{name} takes {o.arity} arguments, got {len(args)}")
        idx = 0
        for a in args:
            idx = idx * self.size + a
        return int(o.table[idx])

    @property
    def signature(self) -> tuple:
        return tuple(o.arity for o in self.ops)

    def _packed(self):
        tables = np.concatenate([o.table for o in self.ops]) if self.ops else np.zeros(0, dtype=np.int64)
        arities = np.array([o.arity for o in self.ops], dtype=np.int64)
        offsets = np.zeros(len(self.ops), dtype=np.int64)
        if len(self.ops) > 1:
            offsets[1:] = np.cumsum([o.table.size for o in self.ops])[:-1]
        return tables, offsets, arities

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "ops": [{"name": o.name, "arity": o.arity, "table": o.table.tolist()} for o in self.ops],
        }

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "FiniteAlgebra":
        try:
            ops = tuple((o["name"], int(o["arity"]), o["table"]) for o in data.get("ops", []))
            return cls(int(data["size"]), ops, name or data.get("name", ""))
        except KeyError as exc:
            raise AlgebraError(f"algebra JSON is missing key {exc}") from None


# --------------------------------------------------------------------------
# built-in algebras and products
# --------------------------------------------------------------------------


def _table(size: int, arity: int, fn) -> list[int]:
    return [fn(*args) for args in product(range(size), repeat=arity)]


def z2() -> FiniteAlgebra:
    return FiniteAlgebra(2, (("+", 2, _table(2, 2, lambda x, y: (x + y) % 2)), ("0", 0, [0])), "z2")


def chain(size: int) -> FiniteAlgebra:
    return FiniteAlgebra(
        size,
        (("meet", 2, _table(size, 2, min)), ("join", 2, _table(size, 2, max))),
        f"chain{size}",
    )


def set_algebra(size: int) -> FiniteAlgebra:
    return FiniteAlgebra(size, (), f"set{size}")


BUILTIN_ALGEBRAS = {
    "z2": z2,
    "chain2": lambda: chain(2),
    "chain3": lambda: chain(3),
    "set3": lambda: set_algebra(3),
}


def builtin_algebra(name: str) -> FiniteAlgebra:
    try:
        return BUILTIN_ALGEBRAS[name]()
    except KeyError:
        raise AlgebraError(f"unknown built-in algebra {name!r}; known: {sorted(BUILTIN_ALGEBRAS)}") from None


def direct_product(a: FiniteAlgebra, b: FiniteAlgebra) -> FiniteAlgebra:
    """Pairs ``(x, y)`` are encoded as ``x * b.size + y``."""
    if a.signature != b.signature:
        raise AlgebraError("factors have different signatures")
    ops = []
    for oa, ob in zip(a.ops, b.ops):
        k = oa.arity
        ta = oa.table.reshape((a.size,) * k) if k else oa.table
        tb = ob.table.reshape((b.size,) * k) if k else ob.table
        table = []
        for args in product(range(a.size * b.size), repeat=k):
            xs = tuple(x // b.size for x in args)
            ys = tuple(x % b.size for x in args)
            table.append(int(ta[xs] if k else ta[0]) * b.size + int(tb[ys] if k else tb[0]))
        ops.append((oa.name, k, table))
    name = f"{a.name}x{b.name}" if a.name and b.name else ""
    return FiniteAlgebra(a.size * b.size, tuple(ops), name)


def power(alg: FiniteAlgebra, k: int) -> FiniteAlgebra:
    if k < 1:
        raise AlgebraError("power needs k >= 1")
    out = alg
    for _ in range(k - 1):
        out = direct_product(out, alg)
    return FiniteAlgebra(out.size, out.ops, f"{alg.name}^{k}" if alg.name and k > 1 else alg.name)


# --------------------------------------------------------------------------
# compatible relations
# --------------------------------------------------------------------------


def _check_size(alg: FiniteAlgebra, r: FinRelation):
    if r.size != alg.size:
        raise AlgebraError(f"relation on {r.size} elements, algebra has {alg.size}")


def is_compatible(alg: FiniteAlgebra, r: FinRelation) -> bool:
    _check_size(alg, r)
    return all(kernels.op_preserves(o.table, o.arity, alg.size, r.matrix) for o in alg.ops)


def subuniverse_closure(alg: FiniteAlgebra, r: FinRelation, symmetric: bool = False) -> FinRelation:
    """Least compatible relation containing ``r`` (and its converse if ``symmetric``)."""
    _check_size(alg, r)
    m = r.matrix.copy()
    if symmetric:
        m |= m.T
    while True:
        new = m.copy()
        for o in alg.ops:
            new |= kernels.op_image(o.table, o.arity, alg.size, new)
        if symmetric:
            new |= new.T
        if (new == m).all():
            return FinRelation(m)
        m = new


def _closed_family(alg: FiniteAlgebra, symmetric: bool, cap: int) -> list[FinRelation]:
    s = alg.size
    bottom = subuniverse_closure(alg, FinRelation.diagonal(s), symmetric)
    seen = {bottom}
    frontier = [bottom]
    gens = [(a, b) for a in range(s) for b in range(s) if a != b and (not symmetric or a < b)]
    while frontier:
        nxt = []
        for c in frontier:
            for a, b in gens:
                if c.matrix[a, b]:
                    continue
                m = c.matrix.copy()
                m[a, b] = True
                d = subuniverse_closure(alg, FinRelation(m), symmetric)
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
                    if len(seen) > cap:
                        raise CapExceeded(f"more than {cap} closed relations")
        frontier = nxt
    return sorted(seen, key=FinRelation.sort_key)


def compatible_reflexive_relations(alg: FiniteAlgebra, cap: int = REFLEXIVE_COUNT_CAP) -> list[FinRelation]:
    """All reflexive subuniverses of ``alg**2``, canonically sorted."""
    return _closed_family(alg, False, cap)


def _restricted_growth(s: int):
    labels = [0] * s

    def rec(k, top):
        if k >= s:
            yield tuple(labels)
            return
        for v in range(top + 2):
            labels[k] = v
            yield from rec(k + 1, max(top, v))

    yield from rec(1, 0)


def congruences(alg: FiniteAlgebra, cap: int = CONGRUENCE_SIZE_CAP) -> list[FinRelation]:
    """Compatible equivalence relations, found by filtering all partitions."""
    if alg.size > cap:
        raise CapExceeded(f"congruence enumeration supports at most {cap} elements, got {alg.size}")
    out = []
    for labels in _restricted_growth(alg.size):
        r = FinRelation.from_partition(labels)
        if is_compatible(alg, r):
            out.append(r)
    return sorted(out, key=FinRelation.sort_key)


def generated_congruence(alg: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> FinRelation:
    pairs = list(pairs)
    for a, b in pairs:
        if not (0 <= a < alg.size and 0 <= b < alg.size):
            raise AlgebraError(f"pair ({a}, {b}) outside the universe")
    pa = np.array([p[0] for p in pairs], dtype=np.int64)
    pb = np.array([p[1] for p in pairs], dtype=np.int64)
    tables, offsets, arities = alg._packed()
    labels = kernels.cg_labels(alg.size, tables, offsets, arities, pa, pb)
    return FinRelation.from_partition(labels)


# --------------------------------------------------------------------------
# tolerances and representability
# --------------------------------------------------------------------------

CONGRUENCE = "congruence"
REPRESENTABLE = "representable"
WEAKLY_REPRESENTABLE = "weakly-representable"
TOLERANCE = "tolerance"
_RANK = {CONGRUENCE: 3, REPRESENTABLE: 2, WEAKLY_REPRESENTABLE: 1, TOLERANCE: 0}


@dataclass(frozen=True)
class ToleranceRecord:
    relation: FinRelation
    kind: str

    @property
    def is_congruence(self) -> bool:
        return _RANK[self.kind] >= 3

    @property
    def is_representable(self) -> bool:
        return _RANK[self.kind] >= 2

    @property
    def is_weakly_representable(self) -> bool:
        return _RANK[self.kind] >= 1


def representations(alg: FiniteAlgebra, cap: int = REFLEXIVE_COUNT_CAP) -> set[FinRelation]:
    """Every ``R o R^-`` with ``R`` compatible and reflexive."""
    return {compose(r, converse(r)) for r in compatible_reflexive_relations(alg, cap)}


def classify(theta: FinRelation, reps: set[FinRelation]) -> str:
    if theta.is_transitive:
        return CONGRUENCE
    if theta in reps:
        return REPRESENTABLE
    # the intersection of every representation above theta is the least
    # weakly representable tolerance containing it
    meet = np.ones_like(theta.matrix)
    for r in reps:
        if theta.issubset(r):
            meet &= r.matrix
    if (meet == theta.matrix).all():
        return WEAKLY_REPRESENTABLE
    return TOLERANCE


def tolerances(alg: FiniteAlgebra, cap: int = TOLERANCE_SIZE_CAP) -> list[ToleranceRecord]:
    if alg.size > cap:
        raise CapExceeded(f"tolerance enumeration supports at most {cap} elements, got {alg.size}")
    reps = representations(alg)
    return [ToleranceRecord(t, classify(t, reps)) for t in _closed_family(alg, True, REFLEXIVE_COUNT_CAP)]


# --------------------------------------------------------------------------
# free algebras
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FreeAlgebraPresentation:
    """Subalgebra of ``base ** (base.size ** m)`` generated by the projections.

    Row ``k`` of ``elements`` is the value table of an ``m``-ary term
    operation, indexed row-major over ``{0..s-1}**m``.
    """

    base: FiniteAlgebra
    m: int
    elements: np.ndarray = field(repr=False)
    generators: tuple
    algebra: FiniteAlgebra = field(repr=False)
    # how each element was first reached: ("gen", j) or (op index, arg indices)
    derivation: tuple = field(repr=False, default=())

    @property
    def size(self) -> int:
        return self.elements.shape[0]

    def table(self, k: int) -> np.ndarray:
        return self.elements[k]

    def term_string(self, k: int, names: Sequence[str] | None = None) -> str:
        names = list(names) if names else [f"x{j + 1}" for j in range(self.m)]
        how = self.derivation[k]
        if how[0] == "gen":
            return names[how[1]]
        op = self.base.ops[how[0]]
        if op.arity == 0:
            return op.name
        return f"{op.name}({', '.join(self.term_string(a, names) for a in how[1])})"

    def term_operation(self, k: int, target: FiniteAlgebra | None = None) -> np.ndarray:
        """Table of element ``k`` read as an ``m``-ary term operation of ``target``.

        ``target`` must have the base algebra's signature; the default is
        the base algebra itself, where the table is just the element vector.
        """
        if target is None or target is self.base:
            return np.array(self.elements[k])
        if target.signature != self.base.signature:
            raise AlgebraError("target algebra has a different signature")
        s = target.size
        coords = np.indices((s,) * self.m).reshape(self.m, -1).astype(np.int64)
        memo: dict[int, np.ndarray] = {}

        def ev(x: int) -> np.ndarray:
            if x in memo:
                return memo[x]
            how = self.derivation[x]
            if how[0] == "gen":
                val = coords[how[1]]
            else:
                op = target.ops[how[0]]
                if op.arity == 0:
                    val = np.full(coords.shape[1], op.table[0], dtype=np.int64)
                else:
                    val = _apply_rows(op, s, [ev(a) for a in how[1]])
            memo[x] = val
            return val

        return ev(k)

    def index_of(self, vector) -> int:
        v = np.asarray(vector, dtype=np.int64)
        hits = np.nonzero((self.elements == v).all(axis=1))[0]
        if not len(hits):
            raise KeyError("vector is not an element of the free algebra")
        return int(hits[0])


def _apply_rows(op: Operation, s: int, rows: Sequence[np.ndarray]) -> np.ndarray:
    idx = np.zeros_like(rows[0])
    for r in rows:
        idx = idx * s + r
    return op.table[idx]


def free_algebra(
    alg: FiniteAlgebra,
    m: int,
    cap_power: int = FREE_POWER_CAP,
    cap_elements: int = FREE_ELEMENT_CAP,
) -> FreeAlgebraPresentation:
    if m < 1:
        raise AlgebraError("need at least one generator")
    s = alg.size
    width = s**m
    if width > cap_power:
        raise CapExceeded(f"{s}**{m} = {width} coordinates exceeds cap {cap_power}")
    coords = np.indices((s,) * m).reshape(m, width).astype(np.int64)
    elems: list[np.ndarray] = []
    how: list[tuple] = []
    index: dict[bytes, int] = {}

    def add(vec, origin) -> int:
        key = vec.tobytes()
        k = index.get(key)
        if k is None:
            k = len(elems)
            if k >= cap_elements:
                raise CapExceeded(f"free algebra exceeds {cap_elements} elements")
            index[key] = k
            elems.append(vec)
            how.append(origin)
        return k

    gens = tuple(add(coords[j], ("gen", j)) for j in range(m))
    for f, o in enumerate(alg.ops):
        if o.arity == 0:
            add(np.full(width, o.table[0], dtype=np.int64), (f, ()))
    old = 0
    while old < len(elems):
        cur = len(elems)
        block = np.stack(elems)
        for f, o in enumerate(alg.ops):
            k = o.arity
            if k == 0:
                continue
            for head in product(range(cur), repeat=k - 1):
                lo = old if all(x < old for x in head) else 0
                if lo >= cur:
                    continue
                rows = [np.broadcast_to(block[x], (cur - lo, width)) for x in head] + [block[lo:cur]]
                out = _apply_rows(o, s, rows)
                for j, vec in enumerate(out):
                    add(vec, (f, head + (lo + j,)))
        old = cur
    elements = np.stack(elems)
    elements.setflags(write=False)

    c = len(elems)
    ops = []
    for o in alg.ops:
        k = o.arity
        if k == 0:
            ops.append((o.name, 0, [index[np.full(width, o.table[0], dtype=np.int64).tobytes()]]))
            continue
        table = np.empty(c**k, dtype=np.int64)
        pos = 0
        for head in product(range(c), repeat=k - 1):
            rows = [np.broadcast_to(elements[x], (c, width)) for x in head] + [elements]
            out = _apply_rows(o, s, rows)
            table[pos : pos + c] = [index[v.tobytes()] for v in out]
            pos += c
        ops.append((o.name, k, table))
    free = FiniteAlgebra(c, tuple(ops), f"F({alg.name},{m})" if alg.name else "")
    return FreeAlgebraPresentation(alg, m, elements, gens, free, tuple(how))
