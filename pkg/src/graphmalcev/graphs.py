"""Edge-labeled graphs with an ordered tuple of distinguished vertices."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

CANONICAL_VERTEX_CAP = 12


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledGraph:
    """Finite undirected graph whose edges carry labels 1..n.

    ``edges`` holds ``(u, v, i)`` triples over vertex ids; they are stored
    deduplicated with endpoints ordered by position in ``vertices``.
    ``distinguished`` is the ordered tuple ``(d_1, ..., d_h)`` and may repeat.
    """

    vertices: tuple
    n: int
    edges: frozenset
    distinguished: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, vertices: Sequence[Hashable], n: int, edges: Iterable, distinguished: Sequence[Hashable]):
        verts = tuple(vertices)
        index = {v: k for k, v in enumerate(verts)}
        if len(index) != len(verts):
            raise GraphError("vertex ids must be unique")
        if n < 1:
            raise GraphError(f"label count must be >= 1, got {n}")
        dist = tuple(distinguished)
        if not dist:
            raise GraphError("at least one distinguished vertex is required")
        for d in dist:
            if d not in index:
                raise GraphError(f"distinguished vertex {d!r} is not a vertex")
        norm = set()
        for e in edges:
            u, v, i = e
            if u not in index or v not in index:
                raise GraphError(f"edge {tuple(e)!r} has an endpoint outside the vertex set")
            if not (isinstance(i, (int, np.integer)) and 1 <= i <= n):
                raise GraphError(f"edge {tuple(e)!r} has label outside 1..{n}")
            if index[u] > index[v]:
                u, v = v, u
            norm.add((u, v, int(i)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "distinguished", dist)
        object.__setattr__(self, "_index", index)

    @property
    def h(self) -> int:
        return len(self.distinguished)

    def index(self, v) -> int:
        return self._index[v]

    def sorted_edges(self) -> list[tuple]:
        """Edges ordered by (label, position of u, position of v)."""
        ix = self._index
        return sorted(self.edges, key=lambda e: (e[2], ix[e[0]], ix[e[1]]))

    def edges_with_label(self, i: int) -> list[tuple]:
        return [e for e in self.sorted_edges() if e[2] == i]

    @cached_property
    def csr(self):
        """Index-based CSR adjacency (indptr, nbr, lab) without self loops; labels 0-based."""
        nv = len(self.vertices)
        adj = [[] for _ in range(nv)]
        for u, v, i in self.sorted_edges():
            a, b = self._index[u], self._index[v]
            if a == b:
                continue
            adj[a].append((b, i - 1))
            adj[b].append((a, i - 1))
        indptr = np.zeros(nv + 1, dtype=np.int64)
        for k in range(nv):
            indptr[k + 1] = indptr[k] + len(adj[k])
        nbr = np.array([b for row in adj for b, _ in row], dtype=np.int64)
        lab = np.array([i for row in adj for _, i in row], dtype=np.int64)
        return indptr, nbr, lab

    @cached_property
    def distinguished_index(self) -> np.ndarray:
        return np.array([self._index[d] for d in self.distinguished], dtype=np.int64)

    def relabel(self, mapping: dict) -> "LabeledGraph":
        """Rename vertices through ``mapping`` (keeps vertex order)."""
        return LabeledGraph(
            [mapping[v] for v in self.vertices],
            self.n,
            [(mapping[u], mapping[v], i) for u, v, i in self.edges],
            [mapping[d] for d in self.distinguished],
        )

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "n": self.n,
            "edges": [[u, v, i] for u, v, i in self.sorted_edges()],
            "distinguished": list(self.distinguished),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LabeledGraph":
        try:
            return cls(data["vertices"], int(data["n"]), [tuple(e) for e in data["edges"]], data["distinguished"])
        except KeyError as exc:
            raise GraphError(f"graph JSON is missing key {exc}") from None


@dataclass(frozen=True)
class LabelPartition:
    label: int
    blocks: tuple  # tuple of tuples of vertex ids, ordered by least vertex position

    def block_of(self, v):
        for b in self.blocks:
            if v in b:
                return b
        raise KeyError(v)


def _check_label(g: LabeledGraph, i: int):
    if not 1 <= i <= g.n:
        raise GraphError(f"label index {i} outside 1..{g.n}")


def label_partition(g: LabeledGraph, i: int) -> LabelPartition:
    """Connected components of the subgraph formed by the label-``i`` edges."""
    _check_label(g, i)
    nv = len(g.vertices)
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, lab in g.edges:
        if lab == i:
            ru, rv = find(g.index(u)), find(g.index(v))
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list] = {}
    for k in range(nv):
        groups.setdefault(find(k), []).append(g.vertices[k])
    blocks = tuple(tuple(groups[r]) for r in sorted(groups))
    return LabelPartition(i, blocks)


def is_regular(g: LabeledGraph) -> bool:
    return all(len(b) <= 2 for i in range(1, g.n + 1) for b in label_partition(g, i).blocks)


def _eccentricity(start, adj, block) -> int:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    assert len(dist) == len(block), "label class is not connected by its own edges"
    return max(dist.values())


def k_constants(g: LabeledGraph) -> list[int]:
    """Twice the largest, over label classes, of the class radius in its own edges.

    Labels whose classes are all singletons give 0.
    """
    out = []
    for i in range(1, g.n + 1):
        adj: dict = {}
        for u, v, lab in g.edges:
            if lab == i and u != v:
                adj.setdefault(u, []).append(v)
                adj.setdefault(v, []).append(u)
        radius = 0
        for block in label_partition(g, i).blocks:
            if len(block) > 1:
                radius = max(radius, min(_eccentricity(x, adj, block) for x in block))
        out.append(2 * radius)
    return out


# --------------------------------------------------------------------------
# canonical form
# --------------------------------------------------------------------------


def _refine(nv, adj, colors):
    """Colour refinement; colours are ranks of isomorphism-invariant signatures."""
    while True:
        sigs = [
            (colors[v], tuple(sorted((lab, colors[u]) for u, lab in adj[v])))
            for v in range(nv)
        ]
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _encode(order, g_edges, dist_idx, nv, n):
    pos = {v: k for k, v in enumerate(order)}
    edges = sorted(
        (min(pos[a], pos[b]), max(pos[a], pos[b]), lab) for a, b, lab in g_edges
    )
    return (n, nv, tuple(pos[d] for d in dist_idx), tuple(edges))


def _twins(adj, v, w) -> bool:
    nv_ = sorted((u, lab) for u, lab in adj[v] if u != w)
    nw_ = sorted((u, lab) for u, lab in adj[w] if u != v)
    return nv_ == nw_


def canonical_form(g: LabeledGraph) -> tuple:
    """Encoding shared by exactly the graphs isomorphic to ``g``.

    Isomorphisms must preserve edge labels and map the distinguished tuple
    onto the distinguished tuple in order.  Uses colour refinement with
    individualisation; exhaustive over the remaining ambiguity.
    """
    nv = len(g.vertices)
    if nv > CANONICAL_VERTEX_CAP:
        raise GraphError(f"canonical_form supports at most {CANONICAL_VERTEX_CAP} vertices, got {nv}")
    ix = g.index
    edges = [(ix(u), ix(v), lab) for u, v, lab in g.edges]
    adj = [[] for _ in range(nv)]
    loops = [[] for _ in range(nv)]
    for a, b, lab in edges:
        if a == b:
            loops[a].append(lab)
        else:
            adj[a].append((b, lab))
            adj[b].append((a, lab))
    dist_idx = [ix(d) for d in g.distinguished]
    # initial colour: self-loop labels plus every position the vertex takes in the tuple
    init = [
        (tuple(sorted(loops[v])), tuple(k for k, d in enumerate(dist_idx) if d == v))
        for v in range(nv)
    ]
    ranks = {s: r for r, s in enumerate(sorted(set(init)))}
    colors = _refine(nv, adj, [ranks[s] for s in init])

    best = None

    def search(colors):
        nonlocal best
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = next((c for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            order = sorted(range(nv), key=lambda v: colors[v])
            enc = _encode(order, edges, dist_idx, nv, g.n)
            if best is None or enc < best:
                best = enc
            return
        tried: list[int] = []
        for v in cells[target]:
            # a transposition with an already-tried twin is an automorphism
            if any(_twins(adj, v, w) for w in tried):
                continue
            tried.append(v)
            split = [2 * c + (0 if u == v else 1) if c == target else 2 * c + 1 for u, c in enumerate(colors)]
            ranks = {s: r for r, s in enumerate(sorted(set(split)))}
            search(_refine(nv, adj, [ranks[s] for s in split]))

    search(colors)
    return best
