"""Inner loops: relation products, compatibility tests, connection search and
congruence closure.

Every kernel has two implementations.  The ``*_nb`` variants are written in
the numba subset and compiled with :func:`graphmalcev._accel.njit`; the
``*_np`` variants use numpy broadcasting or plain Python integers as bitsets.
The public names at the bottom of the module point at whichever backend
``_accel.USE_NUMBA`` selects.  Both backends return identical results,
including the witness chosen by the connection search.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from . import _accel
from ._accel import njit

# --------------------------------------------------------------------------
# relation product
# --------------------------------------------------------------------------


def _compose_loop(a, b):
    s = a.shape[0]
    out = np.zeros((s, s), dtype=np.bool_)
    for x in range(s):
        for y in range(s):
            if a[x, y]:
                for z in range(s):
                    if b[y, z]:
                        out[x, z] = True
    return out


def compose_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int32) @ b.astype(np.int32)) > 0


# --------------------------------------------------------------------------
# compatibility of a binary relation with one operation
# --------------------------------------------------------------------------


def _op_preserves_loop(table, arity, size, rel):
    pa, pb = np.nonzero(rel)
    p = pa.shape[0]
    if arity == 0:
        return rel[table[0], table[0]]
    if p == 0:
        return True
    ctr = np.zeros(arity, dtype=np.int64)
    while True:
        ia = 0
        ib = 0
        for j in range(arity):
            ia = ia * size + pa[ctr[j]]
            ib = ib * size + pb[ctr[j]]
        if not rel[table[ia], table[ib]]:
            return False
        j = arity - 1
        while j >= 0:
            ctr[j] += 1
            if ctr[j] < p:
                break
            ctr[j] = 0
            j -= 1
        if j < 0:
            return True


def _op_image_loop(table, arity, size, rel):
    out = np.zeros((size, size), dtype=np.bool_)
    pa, pb = np.nonzero(rel)
    p = pa.shape[0]
    if arity == 0:
        out[table[0], table[0]] = True
        return out
    if p == 0:
        return out
    ctr = np.zeros(arity, dtype=np.int64)
    while True:
        ia = 0
        ib = 0
        for j in range(arity):
            ia = ia * size + pa[ctr[j]]
            ib = ib * size + pb[ctr[j]]
        out[table[ia], table[ib]] = True
        j = arity - 1
        while j >= 0:
            ctr[j] += 1
            if ctr[j] < p:
                break
            ctr[j] = 0
            j -= 1
        if j < 0:
            return out


def _broadcast_indices(pa, pb, arity, size):
    p = pa.shape[0]
    ia = np.zeros((1,) * arity, dtype=np.int64)
    ib = np.zeros((1,) * arity, dtype=np.int64)
    for j in range(arity):
        shape = [1] * arity
        shape[j] = p
        ia = ia * size + pa.reshape(shape)
        ib = ib * size + pb.reshape(shape)
    return ia.ravel(), ib.ravel()


def op_image_np(table, arity, size, rel):
    out = np.zeros((size, size), dtype=np.bool_)
    if arity == 0:
        out[table[0], table[0]] = True
        return out
    pa, pb = np.nonzero(rel)
    if pa.size == 0:
        return out
    ia, ib = _broadcast_indices(pa, pb, arity, size)
    out[table[ia], table[ib]] = True
    return out


def op_preserves_np(table, arity, size, rel):
    if arity == 0:
        return bool(rel[table[0], table[0]])
    pa, pb = np.nonzero(rel)
    if pa.size == 0:
        return True
    ia, ib = _broadcast_indices(pa, pb, arity, size)
    return bool(rel[table[ia], table[ib]].all())


# --------------------------------------------------------------------------
# connection search
#
# Graph layout: CSR adjacency (indptr, nbr, lab) over vertex indices, self
# loops removed, labels 0-based.  rels has shape (n, s, s).
# Search order: fixed vertices first, then the unassigned vertex with the
# smallest remaining domain (lowest index on ties), values ascending.
# --------------------------------------------------------------------------


def _search_loop(nv, indptr, nbr, lab, rels, fixed_v, fixed_a, assign, dom, assigned, order, nextval):
    s = rels.shape[1]
    for v in range(nv):
        assign[v] = -1
        assigned[v] = False
        for j in range(s):
            dom[0, v, j] = True
    for k in range(fixed_v.shape[0]):
        v = fixed_v[k]
        a = fixed_a[k]
        if assigned[v]:
            if assign[v] != a:
                return False
            continue
        if not dom[0, v, a]:
            return False
        assign[v] = a
        assigned[v] = True
        for j in range(s):
            dom[0, v, j] = j == a
        for e in range(indptr[v], indptr[v + 1]):
            u = nbr[e]
            i = lab[e]
            for j in range(s):
                if not rels[i, a, j]:
                    dom[0, u, j] = False
    nfree = 0
    for v in range(nv):
        cnt = 0
        for j in range(s):
            if dom[0, v, j]:
                cnt += 1
        if cnt == 0:
            return False
        if not assigned[v]:
            nfree += 1
    if nfree == 0:
        return True

    depth = 0
    order[0] = _choose(nv, s, dom, 0, assigned)
    nextval[0] = 0
    while depth >= 0:
        v = order[depth]
        a = nextval[depth]
        while a < s and not dom[depth, v, a]:
            a += 1
        if a == s:
            assigned[v] = False
            assign[v] = -1
            depth -= 1
            continue
        nextval[depth] = a + 1
        nxt = depth + 1
        for u in range(nv):
            for j in range(s):
                dom[nxt, u, j] = dom[depth, u, j]
        for j in range(s):
            dom[nxt, v, j] = j == a
        assign[v] = a
        assigned[v] = True
        ok = True
        for e in range(indptr[v], indptr[v + 1]):
            u = nbr[e]
            if assigned[u]:
                continue
            i = lab[e]
            cnt = 0
            for j in range(s):
                if dom[nxt, u, j] and rels[i, a, j]:
                    cnt += 1
                else:
                    dom[nxt, u, j] = False
            if cnt == 0:
                ok = False
                break
        if not ok:
            assigned[v] = False
            assign[v] = -1
            continue
        if nxt == nfree:
            return True
        depth = nxt
        order[depth] = _choose(nv, s, dom, depth, assigned)
        nextval[depth] = 0
    return False


def _choose_loop(nv, s, dom, level, assigned):
    best = -1
    best_cnt = s + 1
    for v in range(nv):
        if assigned[v]:
            continue
        cnt = 0
        for j in range(s):
            if dom[level, v, j]:
                cnt += 1
        if cnt < best_cnt:
            best_cnt = cnt
            best = v
    return best


def _connect_loop(nv, indptr, nbr, lab, rels, fixed_v, fixed_a):
    s = rels.shape[1]
    assign = np.empty(nv, dtype=np.int64)
    dom = np.empty((nv + 1, nv, s), dtype=np.bool_)
    assigned = np.zeros(nv, dtype=np.bool_)
    order = np.zeros(nv + 1, dtype=np.int64)
    nextval = np.zeros(nv + 1, dtype=np.int64)
    found = _search(nv, indptr, nbr, lab, rels, fixed_v, fixed_a, assign, dom, assigned, order, nextval)
    return found, assign


def _relation_loop(nv, indptr, nbr, lab, rels, dist):
    s = rels.shape[1]
    h = dist.shape[0]
    total = 1
    for _ in range(h):
        total *= s
    out = np.zeros(total, dtype=np.bool_)
    assign = np.empty(nv, dtype=np.int64)
    dom = np.empty((nv + 1, nv, s), dtype=np.bool_)
    assigned = np.zeros(nv, dtype=np.bool_)
    order = np.zeros(nv + 1, dtype=np.int64)
    nextval = np.zeros(nv + 1, dtype=np.int64)
    tup = np.zeros(h, dtype=np.int64)
    for idx in range(total):
        rem = idx
        for k in range(h - 1, -1, -1):
            tup[k] = rem % s
            rem //= s
        out[idx] = _search(nv, indptr, nbr, lab, rels, dist, tup, assign, dom, assigned, order, nextval)
    return out


def _masks(rels: np.ndarray) -> list[list[int]]:
    n, s, _ = rels.shape
    weights = 1 << np.arange(s, dtype=object)
    return [[int(weights[rels[i, a]].sum()) for a in range(s)] for i in range(n)]


def _adjacency(nv, indptr, nbr, lab) -> list[list[tuple[int, int]]]:
    return [
        [(int(nbr[e]), int(lab[e])) for e in range(indptr[v], indptr[v + 1])]
        for v in range(nv)
    ]


def _search_py(nv, adj, masks, s, fixed):
    full = (1 << s) - 1
    dom = [full] * nv
    assign = [-1] * nv
    for v, a in fixed:
        if assign[v] >= 0:
            if assign[v] != a:
                return None
            continue
        if not (dom[v] >> a) & 1:
            return None
        assign[v] = a
        dom[v] = 1 << a
        for u, i in adj[v]:
            dom[u] &= masks[i][a]
    if not all(dom):
        return None
    free = [v for v in range(nv) if assign[v] < 0]

    def rec(dom, left):
        if left == 0:
            return True
        v = min((v for v in range(nv) if assign[v] < 0), key=lambda x: (dom[x].bit_count(), x))
        m = dom[v]
        while m:
            low = m & -m
            m ^= low
            a = low.bit_length() - 1
            nd = dom.copy()
            nd[v] = low
            ok = True
            for u, i in adj[v]:
                if assign[u] >= 0 or u == v:
                    continue
                nd[u] &= masks[i][a]
                if not nd[u]:
                    ok = False
                    break
            if not ok:
                continue
            assign[v] = a
            if rec(nd, left - 1):
                return True
            assign[v] = -1
        return False

    if rec(dom, len(free)):
        return assign
    return None


def connect_np(nv, indptr, nbr, lab, rels, fixed_v, fixed_a):
    s = rels.shape[1]
    adj = _adjacency(nv, indptr, nbr, lab)
    res = _search_py(nv, adj, _masks(rels), s, list(zip(fixed_v.tolist(), fixed_a.tolist())))
    if res is None:
        return False, np.full(nv, -1, dtype=np.int64)
    return True, np.asarray(res, dtype=np.int64)


def relation_np(nv, indptr, nbr, lab, rels, dist):
    s = rels.shape[1]
    adj = _adjacency(nv, indptr, nbr, lab)
    masks = _masks(rels)
    dl = dist.tolist()
    out = [
        _search_py(nv, adj, masks, s, list(zip(dl, tup))) is not None
        for tup in product(range(s), repeat=len(dl))
    ]
    return np.asarray(out, dtype=np.bool_)


# --------------------------------------------------------------------------
# generated congruence: union-find closed under basic translations
# --------------------------------------------------------------------------


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _cg_loop(size, tables, offsets, arities, pa, pb):
    parent = np.arange(size)
    qa = np.empty(size + pa.shape[0], dtype=np.int64)
    qb = np.empty(size + pa.shape[0], dtype=np.int64)
    head = 0
    tail = 0
    for k in range(pa.shape[0]):
        ra = _find(parent, pa[k])
        rb = _find(parent, pb[k])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
            qa[tail] = pa[k]
            qb[tail] = pb[k]
            tail += 1
    args = np.zeros(16, dtype=np.int64)
    while head < tail:
        a = qa[head]
        b = qb[head]
        head += 1
        for f in range(arities.shape[0]):
            k = arities[f]
            if k == 0:
                continue
            off = offsets[f]
            for pos in range(k):
                for j in range(k):
                    args[j] = 0
                while True:
                    ia = 0
                    ib = 0
                    for j in range(k):
                        if j == pos:
                            ia = ia * size + a
                            ib = ib * size + b
                        else:
                            ia = ia * size + args[j]
                            ib = ib * size + args[j]
                    x = tables[off + ia]
                    y = tables[off + ib]
                    rx = _find(parent, x)
                    ry = _find(parent, y)
                    if rx != ry:
                        parent[max(rx, ry)] = min(rx, ry)
                        qa[tail] = x
                        qb[tail] = y
                        tail += 1
                    j = k - 1
                    while j >= 0:
                        if j == pos:
                            j -= 1
                            continue
                        args[j] += 1
                        if args[j] < size:
                            break
                        args[j] = 0
                        j -= 1
                    if j < 0:
                        break
    labels = np.empty(size, dtype=np.int64)
    for x in range(size):
        labels[x] = _find(parent, x)
    return labels


def cg_np(size, tables, offsets, arities, pa, pb):
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        parent[max(rx, ry)] = min(rx, ry)
        return True

    queue = [(int(a), int(b)) for a, b in zip(pa, pb) if union(int(a), int(b))]
    shaped = []
    for f in range(len(arities)):
        k = int(arities[f])
        if k == 0:
            continue
        t = np.asarray(tables[offsets[f] : offsets[f] + size**k]).reshape((size,) * k)
        shaped.append((k, t))
    head = 0
    while head < len(queue):
        a, b = queue[head]
        head += 1
        for k, t in shaped:
            for pos in range(k):
                xs = np.take(t, a, axis=pos).ravel().tolist()
                ys = np.take(t, b, axis=pos).ravel().tolist()
                for x, y in zip(xs, ys):
                    if union(x, y):
                        queue.append((x, y))
    return np.array([find(x) for x in range(size)], dtype=np.int64)


# --------------------------------------------------------------------------
# backend wiring
# --------------------------------------------------------------------------

compose_nb = njit(_compose_loop)
op_preserves_nb = njit(_op_preserves_loop)
op_image_nb = njit(_op_image_loop)
_choose = njit(_choose_loop)
_search = njit(_search_loop)
connect_nb = njit(_connect_loop)
relation_nb = njit(_relation_loop)
_find = njit(_find)
cg_nb = njit(_cg_loop)

if _accel.USE_NUMBA:
    compose = compose_nb
    op_preserves = op_preserves_nb
    op_image = op_image_nb
    connect = connect_nb
    relation = relation_nb
    cg_labels = cg_nb
else:
    compose = compose_np
    op_preserves = op_preserves_np
    op_image = op_image_np
    connect = connect_np
    relation = relation_np
    cg_labels = cg_np
