"""The strong Mal'cev condition attached to a pair of labeled graphs.

For graphs ``g`` (vertices ``v_1..v_m``) and ``h`` with the same labels and the
same number of distinguished vertices, the condition has one ``m``-ary symbol
``t_w`` per vertex ``w`` of ``h`` and the identities

* ``v_{d_k} = t_{e_k}(v_1, ..., v_m)`` for each distinguished index ``k``;
* ``t_w(p(v_1), ..., p(v_m)) = t_w'(p(v_1), ..., p(v_m))`` for each
  label-``i`` edge ``w - w'`` of ``h``, where ``p`` sends every vertex of ``g``
  to a variable naming its label-``i`` class.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations, product
from typing import Mapping, Union

import numpy as np

from .algebra import FiniteAlgebra
from .graphs import GraphError, LabeledGraph, label_partition


@dataclass(frozen=True)
class V:
    """A variable."""

    name: str


@dataclass(frozen=True)
class App:
    """An operation symbol applied to variables."""

    symbol: str
    args: tuple


Expr = Union[V, App]


@dataclass(frozen=True)
class Identity:
    lhs: Expr
    rhs: Expr
    kind: str = "edge"  # "distinguished" | "edge" | "derived"
    label: int = 0

    def variables(self) -> list[str]:
        out: list[str] = []
        for side in (self.lhs, self.rhs):
            names = (side.name,) if isinstance(side, V) else side.args
            for x in names:
                if x not in out:
                    out.append(x)
        return out

    def symbols(self) -> list[str]:
        return [e.symbol for e in (self.lhs, self.rhs) if isinstance(e, App)]


def _fmt(e: Expr) -> str:
    if isinstance(e, V):
        return e.name
    return f"{e.symbol}({','.join(e.args)})"


def _latex_name(name: str) -> str:
    if "_" in name:
        head, tail = name.split("_", 1)
        return f"{head}_{{{tail.replace('_', '')}}}"
    return name


def _fmt_latex(e: Expr) -> str:
    if isinstance(e, V):
        return _latex_name(e.name)
    return f"{_latex_name(e.symbol)}({', '.join(_latex_name(a) for a in e.args)})"


def _expr_json(e: Expr) -> dict:
    if isinstance(e, V):
        return {"var": e.name}
    return {"op": e.symbol, "args": list(e.args)}


def _expr_from_json(d: dict) -> Expr:
    if "var" in d:
        return V(d["var"])
    return App(d["op"], tuple(d["args"]))


@dataclass(frozen=True)
class IdentitySet:
    symbols: tuple  # one per vertex of h, in vertex order
    arity: int
    variables: tuple  # v_1..v_m
    identities: tuple
    projections: tuple = ()  # per label: tuple of (vertex, variable name)
    symbol_of: tuple = ()  # (h-vertex, symbol) pairs

    def __len__(self):
        return len(self.identities)

    def to_text(self) -> str:
        return "\n".join(f"{_fmt(i.lhs)} = {_fmt(i.rhs)}" for i in self.identities)

    def to_latex(self) -> str:
        rows = [f"  {_fmt_latex(i.lhs)} &= {_fmt_latex(i.rhs)}" for i in self.identities]
        return "\\begin{align*}\n" + " \\\\\n".join(rows) + "\n\\end{align*}"

    def to_json(self) -> dict:
        return {
            "symbols": list(self.symbols),
            "arity": self.arity,
            "variables": list(self.variables),
            "identities": [
                {"lhs": _expr_json(i.lhs), "rhs": _expr_json(i.rhs), "kind": i.kind, "label": i.label}
                for i in self.identities
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "IdentitySet":
        ids = tuple(
            Identity(_expr_from_json(d["lhs"]), _expr_from_json(d["rhs"]), d.get("kind", "edge"), d.get("label", 0))
            for d in data["identities"]
        )
        return cls(tuple(data["symbols"]), int(data["arity"]), tuple(data["variables"]), ids)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def simplified(self) -> "IdentitySet":
        """Substitute the projections forced by the distinguished identities.

        ``v_d = t_e(v_1..v_m)`` makes ``t_e`` the projection onto the position
        of ``v_d``; that symbol is eliminated everywhere and identities that
        become trivial are dropped.  Display only: the canonical set is the
        unsimplified one.
        """
        proj: dict[str, int] = {}
        for ident in self.identities:
            if ident.kind == "distinguished" and isinstance(ident.rhs, App):
                sym = ident.rhs.symbol
                if sym not in proj and isinstance(ident.lhs, V) and ident.lhs.name in ident.rhs.args:
                    proj[sym] = ident.rhs.args.index(ident.lhs.name)

        def sub(e: Expr) -> Expr:
            if isinstance(e, App) and e.symbol in proj:
                return V(e.args[proj[e.symbol]])
            return e

        out = []
        for ident in self.identities:
            lhs, rhs = sub(ident.lhs), sub(ident.rhs)
            if lhs == rhs:
                continue
            new = Identity(lhs, rhs, ident.kind, ident.label)
            if new not in out:
                out.append(new)
        symbols = tuple(s for s in self.symbols if s not in proj)
        return IdentitySet(symbols, self.arity, self.variables, tuple(out), self.projections, self.symbol_of)


def _var_name(v) -> str:
    return v if isinstance(v, str) else f"v{v}"


def _sym_name(w) -> str:
    return f"t_{w}" if isinstance(w, str) else f"t_w{w}"


def generate(g: LabeledGraph, h: LabeledGraph, representative: str = "min") -> IdentitySet:
    """Identities of the strong Mal'cev condition for ``g`` included in ``h``.

    ``representative`` picks which vertex of a label class names the class
    variable ("min" or "max" position); any choice gives the same condition
    up to renaming.
    """
    if g.n != h.n:
        raise GraphError(f"label counts differ: {g.n} vs {h.n}")
    if g.h != h.h:
        raise GraphError(f"distinguished counts differ: {g.h} vs {h.h}")
    if representative not in ("min", "max"):
        raise ValueError("representative must be 'min' or 'max'")
    vs = [_var_name(v) for v in g.vertices]
    if len(set(vs)) != len(vs):
        raise GraphError("vertex ids of g give clashing variable names")
    syms = {w: _sym_name(w) for w in h.vertices}

    projections = []
    for i in range(1, g.n + 1):
        pi = {}
        for block in label_partition(g, i).blocks:
            rep = block[0] if representative == "min" else block[-1]
            for v in block:
                pi[v] = "x_" + _var_name(rep)
        projections.append(pi)

    ids = []
    for d, e in zip(g.distinguished, h.distinguished):
        ids.append(Identity(V(_var_name(d)), App(syms[e], tuple(vs)), "distinguished"))
    for w, w2, i in h.sorted_edges():
        if w == w2:
            continue
        args = tuple(projections[i - 1][v] for v in g.vertices)
        ids.append(Identity(App(syms[w], args), App(syms[w2], args), "edge", i))

    return IdentitySet(
        tuple(syms[w] for w in h.vertices),
        len(vs),
        tuple(vs),
        tuple(ids),
        tuple(tuple(pi.items()) for pi in projections),
        tuple(syms.items()),
    )


# --------------------------------------------------------------------------
# comparison up to renaming
# --------------------------------------------------------------------------


def _canon_identity(ident: Identity, rename: Mapping[str, str]) -> tuple:
    def side(e: Expr, names: dict):
        if isinstance(e, V):
            return ("v", names.setdefault(e.name, len(names)))
        return ("a", rename.get(e.symbol, e.symbol), tuple(names.setdefault(a, len(names)) for a in e.args))

    forms = []
    for a, b in ((ident.lhs, ident.rhs), (ident.rhs, ident.lhs)):
        names: dict = {}
        forms.append((side(a, names), side(b, names)))
    return min(forms)


def _profile(ids: IdentitySet) -> dict[str, tuple]:
    prof: dict[str, list] = {}
    for ident in ids.identities:
        for side in (ident.lhs, ident.rhs):
            if isinstance(side, App):
                prof.setdefault(side.symbol, []).append((len(side.args), len(set(side.args))))
    return {k: tuple(sorted(v)) for k, v in prof.items()}


def equivalent_mod_renaming(s1: IdentitySet, s2: IdentitySet) -> bool:
    """True iff a bijection of operation symbols, together with renaming the
    variables inside each identity, carries ``s1`` onto ``s2``.

    Identities are compared as unordered equations.
    """
    if len(s1.identities) != len(s2.identities):
        return False
    p1, p2 = _profile(s1), _profile(s2)
    if sorted(p1.values()) != sorted(p2.values()):
        return False
    target = sorted(_canon_identity(i, {}) for i in s2.identities)
    groups: dict[tuple, tuple[list, list]] = {}
    for sym, pr in p1.items():
        groups.setdefault(pr, ([], []))[0].append(sym)
    for sym, pr in p2.items():
        groups.setdefault(pr, ([], []))[1].append(sym)
    keys = list(groups)
    choices = [list(permutations(groups[k][1])) for k in keys]
    for pick in product(*choices):
        rename = {}
        for k, perm in zip(keys, pick):
            rename.update(zip(groups[k][0], perm))
        if sorted(_canon_identity(i, rename) for i in s1.identities) == target:
            return True
    return False


# --------------------------------------------------------------------------
# evaluation in a finite algebra
# --------------------------------------------------------------------------


def holds_in_algebra(ids: IdentitySet, alg: FiniteAlgebra, assignment: Mapping[str, object]) -> bool:
    """Check every identity under every valuation of its variables.

    ``assignment`` maps each operation symbol to an ``arity``-ary table
    (flat row-major or shaped ``(s,)*arity``).
    """
    s = alg.size
    tables = {}
    for sym in {x for i in ids.identities for x in i.symbols()}:
        if sym not in assignment:
            raise KeyError(f"no operation assigned to {sym}")
        t = np.asarray(assignment[sym], dtype=np.int64).ravel()
        if t.size != s**ids.arity:
            raise ValueError(f"{sym} needs a table of {s**ids.arity} entries, got {t.size}")
        tables[sym] = t

    for ident in ids.identities:
        names = ident.variables()
        grids = np.indices((s,) * len(names)).reshape(len(names), -1) if names else np.zeros((0, 1), np.int64)
        env = dict(zip(names, grids))

        def value(e: Expr):
            if isinstance(e, V):
                return env[e.name]
            idx = np.zeros(grids.shape[1], dtype=np.int64)
            for a in e.args:
                idx = idx * s + env[a]
            return tables[e.symbol][idx]

        if not np.array_equal(value(ident.lhs), value(ident.rhs)):
            return False
    return True
