"""Elimination orderings, tree decompositions, validation, and the nice form.

The greedy minimum-degree heuristic drives everything: it produces an
elimination order whose replay yields the bags of a tree decomposition, and
that decomposition is refined into a rooted binary "nice" form consumed by
the exact dynamic program.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .graph import ParseError, ValidationError, WeightedGraph, edge_key


@dataclass(frozen=True)
class EliminationOrder:
    """A vertex permutation plus the max degree seen at elimination time."""

    order: tuple[int, ...]
    width: int


@dataclass(frozen=True)
class CappedElimination:
    """Result of the early-abort greedy run; order is None when the cap broke."""

    width: int
    order: tuple[int, ...] | None

    @property
    def exceeded(self) -> bool:
        return self.order is None


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]
    width: int


def _adjacency_masks(graph: WeightedGraph) -> tuple[tuple[int, ...], dict[int, int], list[int]]:
    order = tuple(sorted(graph.vertices))
    index = {v: i for i, v in enumerate(order)}
    masks = [0] * len(order)
    for u, v in graph.weights:
        iu, iv = index[u], index[v]
        masks[iu] |= 1 << iv
        masks[iv] |= 1 << iu
    return order, index, masks


def _check_tie(tie: str) -> bool:
    if tie not in ("low", "high"):
        raise ValueError(f"tie rule must be 'low' or 'high', got {tie!r}")
    return tie == "high"


def greedy_degree(graph: WeightedGraph, tie: str = "low") -> EliminationOrder:
    """Full greedy minimum-degree elimination order.

    The reported width is the highest degree any vertex had at the moment it
    was eliminated. Degree ties go to the lowest vertex id by default; the
    alternative "high" rule exists so callers can produce a second,
    independently constructed decomposition of the same graph.
    """
    vs, _, masks = _adjacency_masks(graph)
    width, idx_order = kernels.eliminate(masks, -1, _check_tie(tie))
    assert idx_order is not None
    return EliminationOrder(tuple(vs[i] for i in idx_order), width)


def greedy_degree_capped(
    graph: WeightedGraph, max_width: int, tie: str = "low"
) -> CappedElimination:
    """Greedy elimination that aborts as soon as a step would exceed max_width."""
    if max_width < 0:
        raise ValueError("max_width must be nonnegative")
    vs, _, masks = _adjacency_masks(graph)
    width, idx_order = kernels.eliminate(masks, max_width, _check_tie(tie))
    if idx_order is None:
        return CappedElimination(width, None)
    return CappedElimination(width, tuple(vs[i] for i in idx_order))


def decomposition_from_order(
    graph: WeightedGraph, order: EliminationOrder | Sequence[int]
) -> TreeDecomposition:
    """Build the tree decomposition induced by an elimination order.

    Bag of v = {v} plus the neighbors of v in the fill-in graph that are
    eliminated later; v's node hangs off the node of the earliest-eliminated
    vertex in its bag. The width equals the order's elimination width.
    """
    seq = tuple(order.order) if isinstance(order, EliminationOrder) else tuple(order)
    if len(seq) != graph.n_vertices or set(seq) != set(graph.vertices):
        raise ValidationError("order is not a permutation of the graph's vertices")
    vs, index, masks = _adjacency_masks(graph)
    idx_seq = [index[v] for v in seq]
    bag_masks = kernels.elimination_bags(masks, idx_seq)

    position = {v: p for p, v in enumerate(seq)}
    bags: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = []
    roots: list[int] = []
    for p, bm in enumerate(bag_masks):
        members = []
        m = bm
        while m:
            low = m & -m
            members.append(vs[low.bit_length() - 1])
            m ^= low
        bags.append(frozenset(members))
        higher = [u for u in members if u != seq[p]]
        if higher:
            parent = min(higher, key=lambda u: position[u])
            edges.append((p, position[parent]))
        else:
            roots.append(p)
    # one root per connected component; chain extras so the result is a tree
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    width = max((len(b) for b in bags), default=1) - 1
    return TreeDecomposition(tuple(bags), tuple(edges), width)


def validate_decomposition(graph: WeightedGraph, td: TreeDecomposition) -> list[str]:
    """Check the three decomposition conditions plus the width field.

    Returns every violation found as a human-readable string; an empty list
    means the decomposition is valid for the graph.
    """
    out: list[str] = []
    n = len(td.bags)
    if n == 0:
        return ["decomposition has no bags"]
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, j in td.tree_edges:
        if not (0 <= i < n and 0 <= j < n):
            out.append(f"tree edge ({i}, {j}) references a missing node")
            continue
        adj[i].append(j)
        adj[j].append(i)
    if len(td.tree_edges) != n - 1:
        out.append(f"{len(td.tree_edges)} tree edges for {n} nodes (not a tree)")
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != n:
        out.append("decomposition tree is disconnected")

    covered = set()
    for b in td.bags:
        covered |= b
    if covered != graph.vertices:
        missing = sorted(graph.vertices - covered)
        extra = sorted(covered - graph.vertices)
        if missing:
            out.append(f"condition 1: vertices in no bag: {missing}")
        if extra:
            out.append(f"condition 1: bags mention non-vertices: {extra}")

    for u, v in sorted(graph.weights):
        if not any(u in b and v in b for b in td.bags):
            out.append(f"condition 2: edge ({u}, {v}) not inside any bag")

    for v in sorted(graph.vertices):
        nodes = [i for i in range(n) if v in td.bags[i]]
        if not nodes:
            continue
        reach = {nodes[0]}
        stack = [nodes[0]]
        node_set = set(nodes)
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if j in node_set and j not in reach:
                    reach.add(j)
                    stack.append(j)
        if len(reach) != len(nodes):
            out.append(f"condition 3: bags containing vertex {v} are not connected")

    true_width = max(len(b) for b in td.bags) - 1
    if td.width != true_width:
        out.append(f"width field {td.width} != largest bag size minus one {true_width}")
    return out


# ---------------------------------------------------------------------------
# nice decompositions

LEAF = "leaf"
INTRODUCE = "introduce"
INTRODUCE_EDGE = "edge"
FORGET = "forget"
JOIN = "join"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: tuple[int, ...]  # sorted vertex ids
    children: tuple[int, ...] = ()
    vertex: int = -1  # introduce/forget subject
    edge: tuple[int, int] | None = None  # introduce-edge subject


@dataclass(frozen=True)
class NiceDecomposition:
    """Rooted binary refinement with one introduce-edge node per graph edge.

    Nodes are stored in post-order (children before parents); the last node
    is the root and its bag is exactly {root_vertex}. The pinned root_vertex
    appears in every bag.
    """

    nodes: tuple[NiceNode, ...]
    root_vertex: int
    width: int

    @property
    def root(self) -> int:
        return len(self.nodes) - 1


def make_nice(
    graph: WeightedGraph, td: TreeDecomposition, root_vertex: int
) -> NiceDecomposition:
    """Refine a valid decomposition into the nice form used by the DP.

    root_vertex is inserted into every bag (width grows by at most one) so
    the root collapses to the single bag {root_vertex} and every partial
    component stays visible until the top. Each graph edge is assigned to
    exactly one introduce-edge node whose bag contains both endpoints.
    """
    if root_vertex not in graph.vertices:
        raise ValidationError(f"root vertex {root_vertex} is not in the graph")
    if not td.bags:
        raise ValidationError("cannot refine an empty decomposition")

    bags = [frozenset(b) | {root_vertex} for b in td.bags]
    n = len(bags)
    adj: dict[int, list[int]] = {i: [] for i in range(n)}
    for i, j in td.tree_edges:
        adj[i].append(j)
        adj[j].append(i)

    # root the decomposition tree at node 0, order children before parents
    parent = [-1] * n
    bfs = [0]
    seen = {0}
    for i in bfs:
        for j in adj[i]:
            if j not in seen:
                seen.add(j)
                parent[j] = i
                bfs.append(j)
    if len(bfs) != n:
        raise ValidationError("decomposition tree is disconnected")
    children: dict[int, list[int]] = {i: [] for i in range(n)}
    for j in bfs[1:]:
        children[parent[j]].append(j)

    # each graph edge goes to the lowest-index node covering both endpoints
    assigned: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    for u, v in sorted(graph.weights):
        for i in range(n):
            if u in bags[i] and v in bags[i]:
                assigned[i].append((u, v))
                break
        else:
            raise ValidationError(f"edge ({u}, {v}) is covered by no bag")

    nodes: list[NiceNode] = []

    def emit(kind, bag, ch=(), vertex=-1, edge=None) -> int:
        nodes.append(NiceNode(kind, tuple(sorted(bag)), tuple(ch), vertex, edge))
        return len(nodes) - 1

    def adapt(top: int, from_bag: frozenset[int], to_bag: frozenset[int]) -> int:
        cur, bag = top, set(from_bag)
        for v in sorted(from_bag - to_bag):
            bag.discard(v)
            cur = emit(FORGET, bag, (cur,), vertex=v)
        for v in sorted(to_bag - from_bag):
            bag.add(v)
            cur = emit(INTRODUCE, bag, (cur,), vertex=v)
        return cur

    top_of: dict[int, int] = {}
    for i in reversed(bfs):  # children first
        kids = children[i]
        if not kids:
            cur = emit(LEAF, (root_vertex,))
            bag = {root_vertex}
            for v in sorted(bags[i] - {root_vertex}):
                bag.add(v)
                cur = emit(INTRODUCE, bag, (cur,), vertex=v)
        else:
            adapted = [adapt(top_of[c], bags[c], bags[i]) for c in kids]
            cur = adapted[0]
            for a in adapted[1:]:
                cur = emit(JOIN, bags[i], (cur, a))
        for e in assigned[i]:
            cur = emit(INTRODUCE_EDGE, bags[i], (cur,), edge=e)
        top_of[i] = cur

    cur = top_of[0]
    bag = set(bags[0])
    for v in sorted(bags[0] - {root_vertex}):
        bag.discard(v)
        cur = emit(FORGET, bag, (cur,), vertex=v)

    width = max(len(nd.bag) for nd in nodes) - 1
    return NiceDecomposition(tuple(nodes), root_vertex, width)


def validate_nice(graph: WeightedGraph, nice: NiceDecomposition) -> list[str]:
    """Structural check of a nice decomposition against its graph."""
    out: list[str] = []
    nodes = nice.nodes
    t0 = nice.root_vertex
    if not nodes:
        return ["no nodes"]
    if nodes[-1].bag != (t0,):
        out.append(f"root bag {nodes[-1].bag} is not ({t0},)")
    referenced = set()
    edge_uses: dict[tuple[int, int], int] = {}
    for idx, nd in enumerate(nodes):
        bag = set(nd.bag)
        if t0 not in bag:
            out.append(f"node {idx}: pinned vertex {t0} missing from bag")
        if not bag <= graph.vertices:
            out.append(f"node {idx}: bag contains non-vertices")
        for c in nd.children:
            if c >= idx:
                out.append(f"node {idx}: child {c} does not precede it (post-order)")
            referenced.add(c)
        kinds_ok = {
            LEAF: 0,
            INTRODUCE: 1,
            INTRODUCE_EDGE: 1,
            FORGET: 1,
            JOIN: 2,
        }
        if nd.kind not in kinds_ok:
            out.append(f"node {idx}: unknown kind {nd.kind!r}")
            continue
        if len(nd.children) != kinds_ok[nd.kind]:
            out.append(f"node {idx}: {nd.kind} has {len(nd.children)} children")
            continue
        if nd.kind == LEAF:
            if nd.bag != (t0,):
                out.append(f"node {idx}: leaf bag {nd.bag} is not ({t0},)")
        elif nd.kind == INTRODUCE:
            child = nodes[nd.children[0]]
            if set(child.bag) | {nd.vertex} != bag or nd.vertex in child.bag:
                out.append(f"node {idx}: introduce({nd.vertex}) bag mismatch")
        elif nd.kind == FORGET:
            child = nodes[nd.children[0]]
            if bag | {nd.vertex} != set(child.bag) or nd.vertex in bag:
                out.append(f"node {idx}: forget({nd.vertex}) bag mismatch")
        elif nd.kind == INTRODUCE_EDGE:
            child = nodes[nd.children[0]]
            if child.bag != nd.bag:
                out.append(f"node {idx}: edge node changes the bag")
            if nd.edge is None:
                out.append(f"node {idx}: edge node without an edge")
            else:
                e = edge_key(*nd.edge)
                if e not in graph.weights:
                    out.append(f"node {idx}: edge {e} not in the graph")
                if not set(e) <= bag:
                    out.append(f"node {idx}: edge {e} endpoints not in the bag")
                edge_uses[e] = edge_uses.get(e, 0) + 1
        elif nd.kind == JOIN:
            for c in nd.children:
                if nodes[c].bag != nd.bag:
                    out.append(f"node {idx}: join child {c} bag differs")
    for i in range(len(nodes) - 1):
        if i not in referenced:
            out.append(f"node {i} is not reachable from the root")
    for e in sorted(graph.weights):
        cnt = edge_uses.get(e, 0)
        if cnt != 1:
            out.append(f"edge {e} introduced {cnt} times (want exactly 1)")

    # underlying bags must still form a valid decomposition
    td = TreeDecomposition(
        tuple(frozenset(nd.bag) for nd in nodes),
        tuple((i, c) for i, nd in enumerate(nodes) for c in nd.children),
        max(len(nd.bag) for nd in nodes) - 1,
    )
    out.extend(validate_decomposition(graph, td))
    return out


# ---------------------------------------------------------------------------
# PACE-style .td text format


def write_td(td: TreeDecomposition, n_vertices: int) -> str:
    """Emit the decomposition in the PACE .td text format (1-based ids)."""
    lines = [f"s td {len(td.bags)} {td.width + 1} {n_vertices}"]
    for i, bag in enumerate(td.bags):
        lines.append(f"b {i + 1} " + " ".join(str(v + 1) for v in sorted(bag)))
    for i, j in td.tree_edges:
        lines.append(f"{i + 1} {j + 1}")
    lines.append("")
    return "\n".join(lines)


def read_td(text: str) -> TreeDecomposition:
    """Parse a PACE .td file.

    The header's width field is preserved as stated (not recomputed) so that
    validate_decomposition can flag an inconsistent header.
    """
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    n_bags = width = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.strip()
        if not ln or ln.startswith("c"):
            continue
        toks = ln.split()
        if toks[0] == "s":
            if len(toks) < 5 or toks[1] != "td":
                raise ParseError(f"line {lineno}: malformed solution line")
            n_bags = int(toks[2])
            width = int(toks[3]) - 1
        elif toks[0] == "b":
            if n_bags is None:
                raise ParseError(f"line {lineno}: bag before the s-line")
            idx = int(toks[1]) - 1
            if not (0 <= idx < n_bags):
                raise ParseError(f"line {lineno}: bag id {idx + 1} out of range")
            bags[idx] = frozenset(int(t) - 1 for t in toks[2:])
        else:
            if n_bags is None:
                raise ParseError(f"line {lineno}: edge before the s-line")
            i, j = int(toks[0]) - 1, int(toks[1]) - 1
            edges.append((i, j))
    if n_bags is None or width is None:
        raise ParseError("missing s-line")
    bag_list = [bags.get(i, frozenset()) for i in range(n_bags)]
    return TreeDecomposition(tuple(bag_list), tuple(edges), width)
