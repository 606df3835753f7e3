"""Built-in graphs used by the CLI and the acceptance tests."""

from __future__ import annotations

from .graphs import GraphError, LabeledGraph
from .terms import parse_term, term_to_graph


def perm_g() -> LabeledGraph:
    """Graph of ``a1 o a2``."""
    return term_to_graph(parse_term("a1 o a2", 2), 2)


def perm_h() -> LabeledGraph:
    """Graph of ``a2 o a1``."""
    return term_to_graph(parse_term("a2 o a1", 2), 2)


def k4() -> LabeledGraph:
    """Complete graph on four vertices, every edge labeled 1, ends (0, 1)."""
    return LabeledGraph(range(4), 1, [(a, b, 1) for a in range(4) for b in range(a + 1, 4)], (0, 1))


def path4() -> LabeledGraph:
    """Path 0-1-2-3 with every edge labeled 1, ends (0, 3)."""
    return LabeledGraph(range(4), 1, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], (0, 3))


def edge() -> LabeledGraph:
    return LabeledGraph(range(2), 1, [(0, 1, 1)], (0, 1))


BUILTIN_GRAPHS = {
    "perm_g": perm_g,
    "perm_h": perm_h,
    "k4": k4,
    "path4": path4,
    "edge": edge,
}


def builtin_graph(name: str) -> LabeledGraph:
    try:
        return BUILTIN_GRAPHS[name]()
    except KeyError:
        raise GraphError(f"unknown built-in graph {name!r}; known: {sorted(BUILTIN_GRAPHS)}") from None
