# cython: language_level=3
"""Compiled twin of _kernels_py; see that module for the contracts.

Semantics must stay bit-identical to the pure-Python backend. Masks,
weights and DP values remain Python objects (arbitrary precision, int or
float), so only loop bookkeeping is typed; the speedup comes from removing
interpreter dispatch in the inner loops.
"""

import heapq
from math import inf

BACKEND_NAME = "cython"


def eliminate(masks, cap, tie_high=False):
    """Greedy minimum-degree elimination over bitmask adjacency.

    masks[i] is the neighbor bitmask of vertex i (the caller's list is not
    mutated). Ties on degree go to the lowest index, or the highest when
    tie_high is set. cap < 0 disables the width cap.

    Returns (width, order). When some elimination would exceed cap the scan
    aborts and returns (exceeding_degree, None).
    """
    cdef Py_ssize_t n = len(masks)
    cdef Py_ssize_t v, u, d, du, width, alive
    cdef bint high = bool(tie_high)
    adj = list(masks)
    deg = [m.bit_count() for m in adj]
    if high:
        heap = [(deg[v], -v) for v in range(n)]
    else:
        heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    removed = [False] * n
    order = []
    width = 0
    alive = n
    cdef Py_ssize_t cap_c = cap
    while alive:
        d, key = heapq.heappop(heap)
        v = -key if high else key
        if removed[v] or d != deg[v]:
            continue
        if cap_c >= 0 and d > cap_c:
            return d, None
        if d > width:
            width = d
        order.append(v)
        removed[v] = True
        alive -= 1
        nb = adj[v]
        adj[v] = 0
        not_v = ~((<object> 1) << v)
        m = nb
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            # neighborhood becomes a clique, v disappears
            nu = (adj[u] | nb) & ~((<object> 1) << u) & not_v
            adj[u] = nu
            du = nu.bit_count()
            deg[u] = du
            heapq.heappush(heap, (du, -u if high else u))
    return width, order


def elimination_bags(masks, order):
    """Replay a fixed elimination order; bag i = order[i] plus its remaining neighbors."""
    cdef Py_ssize_t v, u
    adj = list(masks)
    bags = []
    for v in order:
        nb = adj[v]
        bags.append(nb | ((<object> 1) << v))
        adj[v] = 0
        not_v = ~((<object> 1) << v)
        m = nb
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            adj[u] = (adj[u] | nb) & ~((<object> 1) << u) & not_v
    return bags


def dijkstra_multi(indptr, nbrs, wts, sources, n):
    """Multi-source Dijkstra over CSR arrays; returns (dist, pred) lists.

    pred[v] is -1 for sources and unreached vertices; unreached distances
    stay inf. Ties resolve deterministically (first strict improvement wins,
    heap breaks equal distances by vertex index).
    """
    cdef Py_ssize_t nn = n
    cdef Py_ssize_t v, u, i, lo, hi
    dist = [inf] * nn
    pred = [-1] * nn
    heap = []
    for s in sources:
        dist[s] = 0
        heap.append((0, s))
    heapq.heapify(heap)
    while heap:
        d, vo = heapq.heappop(heap)
        v = vo
        if d > dist[v]:
            continue
        lo = indptr[v]
        hi = indptr[v + 1]
        for i in range(lo, hi):
            u = nbrs[i]
            nd = d + wts[i]
            if nd < dist[u]:
                dist[u] = nd
                pred[u] = v
                heapq.heappush(heap, (nd, u))
    return dist, pred


def canon_labels(labels):
    """Renumber block labels into first-occurrence order (canonical form)."""
    seen = {}
    out = []
    for x in labels:
        r = seen.get(x)
        if r is None:
            r = len(seen)
            seen[x] = r
        out.append(r)
    return tuple(out)


def dp_leaf():
    # single pinned vertex, chosen, in its own block, cost 0
    return {(1, (0,)): (0, None)}


def dp_introduce_vertex(table, pos, is_terminal):
    """Bag gains a vertex at position pos.

    Non-terminals branch into an excluded copy and an included-as-singleton
    copy; terminals must be included. Both branches are injective so no
    collision handling is needed.
    """
    cdef Py_ssize_t p = pos
    cdef Py_ssize_t j
    cdef bint term = bool(is_terminal)
    out = {}
    low = ((<object> 1) << p) - 1
    bit = (<object> 1) << p
    for key, entry in table.items():
        mask = key[0]
        labels = key[1]
        val = entry[0]
        nm = (mask & low) | ((mask >> p) << (p + 1))
        if not term:
            out[(nm, labels)] = (val, (key, False))
        j = (mask & low).bit_count()
        nl = canon_labels(labels[:j] + (len(labels),) + labels[j:])
        out[(nm | bit, nl)] = (val, (key, True))
    return out


def dp_introduce_edge(table, pu, pv, w):
    """Offer one graph edge: a state may pay w to merge its endpoints' blocks."""
    out = {}
    bu = (<object> 1) << pu
    bv = (<object> 1) << pv
    lowu = bu - 1
    lowv = bv - 1
    for key, entry in table.items():
        val = entry[0]
        cur = out.get(key)
        if cur is None or val < cur[0]:
            out[key] = (val, (key, False))
        mask = key[0]
        labels = key[1]
        if (mask & bu) and (mask & bv):
            lu = labels[(mask & lowu).bit_count()]
            lv = labels[(mask & lowv).bit_count()]
            if lu == lv:
                continue  # edge inside a block only adds weight
            if lu > lv:
                lu, lv = lv, lu
            merged = canon_labels(tuple(lu if x == lv else x for x in labels))
            nk = (mask, merged)
            nv = val + w
            cur = out.get(nk)
            if cur is None or nv < cur[0]:
                out[nk] = (nv, (key, True))
    return out


def dp_forget(table, pos):
    """Bag drops the vertex at position pos.

    A chosen vertex may leave only if its block keeps another bag vertex;
    otherwise its component could never reattach and the state dies.
    """
    cdef Py_ssize_t p = pos
    cdef Py_ssize_t j
    out = {}
    bit = (<object> 1) << p
    low = bit - 1
    for key, entry in table.items():
        mask = key[0]
        labels = key[1]
        val = entry[0]
        if mask & bit:
            j = (mask & low).bit_count()
            lab = labels[j]
            rest = labels[:j] + labels[j + 1 :]
            if lab not in rest:
                continue
            nl = canon_labels(rest)
        else:
            nl = labels
        nm = (mask & low) | ((mask >> (p + 1)) << p)
        nk = (nm, nl)
        cur = out.get(nk)
        if cur is None or val < cur[0]:
            out[nk] = (val, key)
    return out


def dp_join(left, right):
    """Combine sibling tables over an identical bag.

    States pair up on equal chosen sets; values add and blocks coarsen to
    the transitive closure of overlaps between the two partitions.
    """
    cdef Py_ssize_t c, i, a, b, r
    by_mask = {}
    for key, entry in right.items():
        by_mask.setdefault(key[0], []).append((key, entry[0]))
    out = {}
    for lkey, lentry in left.items():
        mask = lkey[0]
        llabels = lkey[1]
        matches = by_mask.get(mask)
        if not matches:
            continue
        lval = lentry[0]
        c = len(llabels)
        for rkey, rval in matches:
            parent = list(range(c))
            for labels in (llabels, rkey[1]):
                first = {}
                for i in range(c):
                    lab = labels[i]
                    ro = first.get(lab)
                    if ro is None:
                        first[lab] = i
                    else:
                        a = i
                        while parent[a] != a:
                            a = parent[a]
                        b = ro
                        while parent[b] != b:
                            b = parent[b]
                        if a != b:
                            parent[a] = b
            roots = []
            for i in range(c):
                a = i
                while parent[a] != a:
                    a = parent[a]
                roots.append(a)
            nk = (mask, canon_labels(roots))
            nv = lval + rval
            cur = out.get(nk)
            if cur is None or nv < cur[0]:
                out[nk] = (nv, (lkey, rkey))
    return out
