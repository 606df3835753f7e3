"""{o, &}-terms over relation variables a1..an.

Grammar (composition binds tighter, both operators left-associative)::

    term   := iterm ('&' iterm)*
    iterm  := factor ('o' factor)*
    factor := 'a' INT | '(' term ')'

``∘`` and ``∩`` are accepted for ``o`` and ``&``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .graphs import LabeledGraph
from .relations import FinRelation, UniverseMismatch, compose, intersect


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Compose:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Intersect:
    left: "Term"
    right: "Term"


Term = Union[Var, Compose, Intersect]


# --------------------------------------------------------------------------
# parsing and printing
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"a(\d+)|[o∘&∩()]")
_KINDS = {"o": "comp", "∘": "comp", "&": "cap", "∩": "cap", "(": "(", ")": ")"}


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1) is not None:
            out.append(("var", int(m.group(1)), pos))
        else:
            out.append((_KINDS[m.group(0)], None, pos))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, n: int):
        self.toks = _tokenize(text)
        self.k = 0
        self.n = n

    def peek(self):
        return self.toks[self.k]

    def take(self):
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def term(self) -> Term:
        left = self.iterm()
        while self.peek()[0] == "cap":
            self.take()
            left = Intersect(left, self.iterm())
        return left

    def iterm(self) -> Term:
        left = self.factor()
        while self.peek()[0] == "comp":
            self.take()
            left = Compose(left, self.factor())
        return left

    def factor(self) -> Term:
        kind, val, pos = self.take()
        if kind == "var":
            if not 1 <= val <= self.n:
                raise TermSyntaxError(f"variable a{val} outside a1..a{self.n}", pos)
            return Var(val)
        if kind == "(":
            inner = self.term()
            kind2, _, pos2 = self.take()
            if kind2 != ")":
                raise TermSyntaxError("expected ')'", pos2)
            return inner
        what = "end of input" if kind == "end" else repr(kind)
        raise TermSyntaxError(f"expected a variable or '(' but found {what}", pos)


def parse_term(text: str, n: int) -> Term:
    if n < 1:
        raise ValueError(f"variable count must be >= 1, got {n}")
    p = _Parser(text, n)
    t = p.term()
    kind, _, pos = p.peek()
    if kind != "end":
        raise TermSyntaxError("unexpected trailing input", pos)
    return t


def print_term(t: Term) -> str:
    """Text with the fewest parentheses that still reparses to ``t``."""
    if isinstance(t, Var):
        return f"a{t.index}"
    if isinstance(t, Compose):
        left = print_term(t.left)
        if isinstance(t.left, Intersect):
            left = f"({left})"
        right = print_term(t.right)
        if not isinstance(t.right, Var):
            right = f"({right})"
        return f"{left} o {right}"
    left = print_term(t.left)
    right = print_term(t.right)
    if isinstance(t.right, Intersect):
        right = f"({right})"
    return f"{left} & {right}"


def term_to_json(t: Term) -> dict:
    if isinstance(t, Var):
        return {"op": "var", "index": t.index}
    op = "comp" if isinstance(t, Compose) else "cap"
    return {"op": op, "left": term_to_json(t.left), "right": term_to_json(t.right)}


def term_from_json(data: dict) -> Term:
    op = data.get("op")
    if op == "var":
        return Var(int(data["index"]))
    if op in ("comp", "cap"):
        cls = Compose if op == "comp" else Intersect
        return cls(term_from_json(data["left"]), term_from_json(data["right"]))
    raise ValueError(f"unknown term op {op!r}")


def leaves(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    else:
        yield from leaves(t.left)
        yield from leaves(t.right)


def term_size(t: Term) -> int:
    """Number of variable occurrences."""
    return sum(1 for _ in leaves(t))


def max_index(t: Term) -> int:
    return max(v.index for v in leaves(t))


def all_terms(size: int, n: int) -> Iterator[Term]:
    """Every term with exactly ``size`` variable occurrences over a1..an."""
    if size == 1:
        for i in range(1, n + 1):
            yield Var(i)
        return
    for k in range(1, size):
        lefts = list(all_terms(k, n))
        rights = list(all_terms(size - k, n))
        for a in lefts:
            for b in rights:
                yield Compose(a, b)
                yield Intersect(a, b)


# --------------------------------------------------------------------------
# graphs and semantics
# --------------------------------------------------------------------------


def _build(t: Term):
    """Return (vertex count, edges over 0-based ints, d1, d2)."""
    if isinstance(t, Var):
        return 2, [(0, 1, t.index)], 0, 1
    nl, el, l1, l2 = _build(t.left)
    nr, er, r1, r2 = _build(t.right)
    glue = {r1: l2} if isinstance(t, Compose) else {r1: l1, r2: l2}
    mapping = {}
    nxt = nl
    for v in range(nr):
        if v in glue:
            mapping[v] = glue[v]
        else:
            mapping[v] = nxt
            nxt += 1
    edges = el + [(mapping[u], mapping[v], i) for u, v, i in er]
    if isinstance(t, Compose):
        return nxt, edges, l1, mapping[r2]
    return nxt, edges, l1, l2


def term_to_graph(t: Term, n: int | None = None) -> LabeledGraph:
    """Series-parallel graph of ``t`` with distinguished pair (d1, d2).

    Vertices are ``0..k-1``; a variable is a single edge, composition glues
    the end of the left graph to the start of the right one, intersection
    glues both ends.
    """
    nv, edges, d1, d2 = _build(t)
    return LabeledGraph(range(nv), n or max_index(t), edges, (d1, d2))


def eval_term(t: Term, rels: Sequence[FinRelation]) -> FinRelation:
    if not rels:
        raise ValueError("at least one relation is required")
    size = rels[0].size
    if any(r.size != size for r in rels):
        raise UniverseMismatch("all relations must live on the same universe")
    if max_index(t) > len(rels):
        raise ValueError(f"term uses a{max_index(t)} but only {len(rels)} relations given")

    def ev(u: Term) -> FinRelation:
        if isinstance(u, Var):
            return rels[u.index - 1]
        if isinstance(u, Compose):
            return compose(ev(u.left), ev(u.right))
        return intersect(ev(u.left), ev(u.right))

    return ev(t)

