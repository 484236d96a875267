"""Graph data model, STP file ingestion and the elementary graph routines.

Vertices are dense 0-based integers internally. STP files use 1-based ids,
so file id = internal id + 1 everywhere in the toolkit; readers and writers
apply that mapping consistently.

Edge weights are nonnegative 64-bit integers. Fractional weights in input
files are rejected so that all weight comparisons stay exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from . import kernels

Edge = tuple[int, int]

STP_MAGIC = "33D32945 STP File, STP Format Version 1.0"


class SteinerError(Exception):
    """Base class for all toolkit errors."""


class ParseError(SteinerError):
    """Malformed input (STP, pool or decomposition file)."""


class ValidationError(SteinerError):
    """A constructed value violates one of its invariants."""


class InfeasibleError(SteinerError):
    """The requested object does not exist, e.g. terminals cannot be connected."""


def edge_key(u: int, v: int) -> Edge:
    """Normalized (small, large) representation of an undirected edge."""
    return (u, v) if u <= v else (v, u)


class DisjointSets:
    """Union-find over arbitrary hashable items, path compression + size."""

    __slots__ = ("parent", "size")

    def __init__(self) -> None:
        self.parent: dict = {}
        self.size: dict = {}

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class WeightedGraph:
    """Simple undirected graph with nonnegative integer edge weights.

    Immutable after construction; derived views (adjacency, CSR arrays) are
    cached on first use and safe to share across threads. ``weights`` maps
    normalized edges to costs and doubles as the edge set.
    """

    vertices: frozenset[int]
    weights: dict[Edge, int]

    @staticmethod
    def build(
        vertices: Iterable[int], weighted_edges: Iterable[tuple[int, int, int]]
    ) -> "WeightedGraph":
        """Construct and validate a graph from vertex ids and (u, v, w) triples."""
        vset = frozenset(vertices)
        wmap: dict[Edge, int] = {}
        for u, v, w in weighted_edges:
            if u == v:
                raise ValidationError(f"self-loop at vertex {u}")
            if u not in vset or v not in vset:
                raise ValidationError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
            if w < 0:
                raise ValidationError(f"negative weight {w} on edge ({u}, {v})")
            e = edge_key(u, v)
            if e in wmap and wmap[e] != w:
                raise ValidationError(
                    f"conflicting weights for edge {e}: {wmap[e]} vs {w}"
                )
            wmap[e] = w
        return WeightedGraph(vset, wmap)

    @property
    def edges(self) -> Iterable[Edge]:
        return self.weights.keys()

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    def weight(self, u: int, v: int) -> int:
        return self.weights[edge_key(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.weights

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.weights:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(a)) for v, a in nbrs.items()}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def csr(self) -> tuple[tuple[int, ...], dict[int, int], list[int], list[int], list[int]]:
        """Compact-index CSR view: (vertex_order, index_of, indptr, nbr, weight)."""
        order = tuple(sorted(self.vertices))
        index = {v: i for i, v in enumerate(order)}
        indptr = [0]
        nbr: list[int] = []
        wts: list[int] = []
        for v in order:
            for u in self.adjacency[v]:
                nbr.append(index[u])
                wts.append(self.weights[edge_key(u, v)])
            indptr.append(len(nbr))
        return order, index, indptr, nbr, wts

    def csr_weight_list(self, weight_map: dict[Edge, float] | None) -> list:
        """Per-CSR-slot weight list; ``weight_map`` overrides the graph weights."""
        _, _, _, _, wts = self.csr
        if weight_map is None:
            return wts
        order = self.csr[0]
        out = []
        for v in order:
            for u in self.adjacency[v]:
                out.append(weight_map[edge_key(u, v)])
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        start = min(self.vertices)
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.vertices)

    def subgraph_of_edges(
        self, edges: Iterable[Edge], extra_vertices: Iterable[int] = ()
    ) -> "WeightedGraph":
        """Edge-induced subgraph, inheriting this graph's weights."""
        verts = set(extra_vertices)
        wmap: dict[Edge, int] = {}
        for u, v in edges:
            e = edge_key(u, v)
            if e not in self.weights:
                raise ValidationError(f"edge {e} is not part of the host graph")
            wmap[e] = self.weights[e]
            verts.add(e[0])
            verts.add(e[1])
        if not verts <= self.vertices:
            raise ValidationError("extra vertices must belong to the host graph")
        return WeightedGraph(frozenset(verts), wmap)

    def induced_subgraph(self, vertices: Iterable[int]) -> "WeightedGraph":
        """Vertex-induced subgraph: keeps every edge with both ends inside."""
        vset = frozenset(vertices)
        if not vset <= self.vertices:
            raise ValidationError("induced vertex set must be a subset of the graph")
        wmap = {}
        for v in vset:
            for u in self.adjacency[v]:
                if u > v and u in vset:
                    wmap[(v, u)] = self.weights[(v, u)]
        return WeightedGraph(vset, wmap)

    def total_weight(self, edges: Iterable[Edge]) -> int:
        return sum(self.weights[edge_key(u, v)] for u, v in edges)


def graph_union(graphs: Sequence[WeightedGraph]) -> WeightedGraph:
    """Union of vertex and edge sets; weights must agree on shared edges."""
    if not graphs:
        raise ValidationError("union of an empty list of graphs")
    verts: set[int] = set()
    wmap: dict[Edge, int] = {}
    for g in graphs:
        verts |= g.vertices
        for e, w in g.weights.items():
            prev = wmap.get(e)
            if prev is not None and prev != w:
                raise ValidationError(f"conflicting weights for edge {e}: {prev} vs {w}")
            wmap[e] = w
    return WeightedGraph(frozenset(verts), wmap)


@dataclass(frozen=True)
class SteinerInstance:
    """A connected weighted graph together with its terminal set."""

    graph: WeightedGraph
    terminals: frozenset[int]
    name: str = ""

    @staticmethod
    def create(graph: WeightedGraph, terminals: Iterable[int], name: str = "") -> "SteinerInstance":
        tset = frozenset(terminals)
        if not tset:
            raise ValidationError("instance needs at least one terminal")
        if not tset <= graph.vertices:
            raise ValidationError("terminals must be vertices of the graph")
        if not graph.is_connected():
            raise ValidationError("instance graph is not connected")
        return SteinerInstance(graph, tset, name)

    @property
    def n_terminals(self) -> int:
        return len(self.terminals)


@dataclass(frozen=True)
class SteinerSolution:
    """A tree spanning the terminals, stored as its edge set plus total weight."""

    edges: frozenset[Edge]
    weight: int

    @staticmethod
    def from_edges(graph: WeightedGraph, edges: Iterable[Edge]) -> "SteinerSolution":
        es = frozenset(edge_key(u, v) for u, v in edges)
        return SteinerSolution(es, graph.total_weight(es))

    @cached_property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for e in self.edges for v in e)

    def canonical_edges(self) -> tuple[Edge, ...]:
        """Sorted edge tuple; used for deduplication and serialization."""
        return tuple(sorted(self.edges))


def solution_violations(instance: SteinerInstance, solution: SteinerSolution) -> list[str]:
    """Check the tree/coverage/pruned-form invariants; returns each violation found."""
    g = instance.graph
    out: list[str] = []
    for u, v in solution.edges:
        if not g.has_edge(u, v):
            out.append(f"edge ({u}, {v}) not in instance graph")
    if out:
        return out
    if solution.weight != g.total_weight(solution.edges):
        out.append(
            f"cached weight {solution.weight} != edge total {g.total_weight(solution.edges)}"
        )
    if not solution.edges:
        if len(instance.terminals) != 1:
            out.append("empty edge set is only valid for a single-terminal instance")
        return out
    verts = solution.vertices
    if not instance.terminals <= verts:
        missing = sorted(instance.terminals - verts)
        out.append(f"terminals not spanned: {missing}")
    if len(solution.edges) != len(verts) - 1:
        out.append(
            f"edge count {len(solution.edges)} != |V|-1 = {len(verts) - 1} (not a tree)"
        )
    dsu = DisjointSets()
    for v in verts:
        dsu.add(v)
    for u, v in solution.edges:
        if not dsu.union(u, v):
            out.append(f"edge ({u}, {v}) closes a cycle")
    roots = {dsu.find(v) for v in verts}
    if len(roots) > 1:
        out.append("solution is disconnected")
    deg: dict[int, int] = {}
    for u, v in solution.edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    for v, d in sorted(deg.items()):
        if d == 1 and v not in instance.terminals:
            out.append(f"non-terminal leaf {v}")
    return out


def assert_valid_solution(instance: SteinerInstance, solution: SteinerSolution) -> None:
    problems = solution_violations(instance, solution)
    if problems:
        raise ValidationError("; ".join(problems))


# ---------------------------------------------------------------------------
# STP file format


_NAME_RE = re.compile(r'^name\s+"?([^"]*)"?\s*$', re.IGNORECASE)


def parse_stp(text: str, name: str = "") -> SteinerInstance:
    """Parse STP Format Version 1.0 text into an instance.

    Duplicate edges keep the minimum-weight copy, self-loops are dropped,
    unknown sections are skipped. Raises ParseError for format problems and
    ValidationError for semantic ones (disconnected graph, no terminals).
    """
    lines = text.splitlines()
    pos = 0

    def next_line() -> tuple[int, str] | None:
        nonlocal pos
        while pos < len(lines):
            ln = lines[pos].strip()
            pos += 1
            if ln:
                return pos, ln
        return None

    first = next_line()
    if first is None or first[1].lower() != STP_MAGIC.lower():
        raise ParseError("missing or malformed STP header line")

    n_nodes: int | None = None
    edge_rows: list[tuple[int, int, int]] = []
    declared_edges: int | None = None
    terminal_ids: list[int] = []
    declared_terminals: int | None = None
    comment_name = ""
    saw_eof = False
    saw_graph = False
    saw_terminals = False

    def parse_int(tok: str, lineno: int, what: str) -> int:
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"line {lineno}: {what} is not an integer: {tok!r}") from None

    while True:
        item = next_line()
        if item is None:
            break
        lineno, ln = item
        toks = ln.split()
        head = toks[0].lower()
        if head == "eof":
            saw_eof = True
            break
        if head != "section":
            raise ParseError(f"line {lineno}: expected SECTION or EOF, got {ln!r}")
        if len(toks) < 2:
            raise ParseError(f"line {lineno}: SECTION without a name")
        section = toks[1].lower()
        while True:
            item = next_line()
            if item is None:
                raise ParseError(f"unterminated SECTION {section}")
            lineno, ln = item
            toks = ln.split()
            head = toks[0].lower()
            if head == "end":
                break
            if section == "graph":
                saw_graph = True
                if head == "nodes":
                    n_nodes = parse_int(toks[1], lineno, "node count")
                elif head == "edges":
                    declared_edges = parse_int(toks[1], lineno, "edge count")
                elif head == "e":
                    if len(toks) != 4:
                        raise ParseError(f"line {lineno}: edge line needs 'E u v w'")
                    u = parse_int(toks[1], lineno, "edge endpoint")
                    v = parse_int(toks[2], lineno, "edge endpoint")
                    try:
                        w = int(toks[3])
                    except ValueError:
                        raise ParseError(
                            f"line {lineno}: non-integer edge weight {toks[3]!r} "
                            "(fractional weights are not supported)"
                        ) from None
                    edge_rows.append((u, v, w))
                elif head == "a":
                    raise ParseError(f"line {lineno}: directed arcs are not supported")
                # other graph keys (Obstacles, ...) ignored
            elif section == "terminals":
                saw_terminals = True
                if head == "terminals":
                    declared_terminals = parse_int(toks[1], lineno, "terminal count")
                elif head == "t":
                    terminal_ids.append(parse_int(toks[1], lineno, "terminal id"))
            elif section == "comment":
                m = _NAME_RE.match(ln)
                if m:
                    comment_name = m.group(1).strip()
            # unknown sections skipped line by line

    if not saw_eof:
        raise ParseError("missing EOF line")
    if not saw_graph or n_nodes is None:
        raise ParseError("missing Graph section or node count")
    if declared_edges is not None and declared_edges != len(edge_rows):
        raise ParseError(
            f"declared {declared_edges} edges but found {len(edge_rows)} edge lines"
        )
    if not saw_terminals:
        raise ParseError("missing Terminals section")
    if declared_terminals is not None and declared_terminals != len(terminal_ids):
        raise ParseError(
            f"declared {declared_terminals} terminals but found {len(terminal_ids)}"
        )

    wmap: dict[Edge, int] = {}
    for u, v, w in edge_rows:
        if not (1 <= u <= n_nodes and 1 <= v <= n_nodes):
            raise ParseError(f"edge ({u}, {v}) endpoint out of range 1..{n_nodes}")
        if w < 0:
            raise ParseError(f"negative weight {w} on edge ({u}, {v})")
        if u == v:
            continue  # self-loops dropped
        e = edge_key(u - 1, v - 1)
        if e not in wmap or w < wmap[e]:
            wmap[e] = w  # parallel edges keep the cheapest copy

    terms = set()
    for t in terminal_ids:
        if not (1 <= t <= n_nodes):
            raise ParseError(f"terminal id out of range: {t}")
        terms.add(t - 1)
    if not terms:
        raise ValidationError("instance has no terminals")

    graph = WeightedGraph(frozenset(range(n_nodes)), wmap)
    return SteinerInstance.create(graph, terms, name=comment_name or name)


def parse_stp_file(path) -> SteinerInstance:
    from pathlib import Path

    p = Path(path)
    return parse_stp(p.read_text(), name=p.stem)


def write_stp(instance: SteinerInstance) -> str:
    """Serialize an instance back to STP Format Version 1.0 (1-based ids)."""
    g = instance.graph
    n = g.n_vertices
    if g.vertices != frozenset(range(n)):
        raise ValidationError("only dense 0-based instances can be serialized")
    out = [STP_MAGIC, ""]
    if instance.name:
        out += ["SECTION Comment", f'Name    "{instance.name}"', "END", ""]
    out += ["SECTION Graph", f"Nodes {n}", f"Edges {g.n_edges}"]
    for (u, v), w in sorted(g.weights.items()):
        out.append(f"E {u + 1} {v + 1} {w}")
    out += ["END", "", "SECTION Terminals", f"Terminals {len(instance.terminals)}"]
    for t in sorted(instance.terminals):
        out.append(f"T {t + 1}")
    out += ["END", "", "EOF", ""]
    return "\n".join(out)


# ---------------------------------------------------------------------------
# elementary algorithms


def shortest_paths(
    graph: WeightedGraph, source: int, weight_map: dict[Edge, float] | None = None
) -> dict[int, tuple[float, int | None]]:
    """Single-source shortest paths: vertex -> (distance, predecessor).

    Unreachable vertices get distance ``inf`` and predecessor ``None``.
    """
    if source not in graph.vertices:
        raise ValidationError(f"source {source} is not a vertex")
    order, index, indptr, nbr, _ = graph.csr
    wts = graph.csr_weight_list(weight_map)
    dist, pred = kernels.dijkstra_multi(indptr, nbr, wts, [index[source]], len(order))
    return {
        order[i]: (dist[i], order[pred[i]] if pred[i] >= 0 else None)
        for i in range(len(order))
    }


def minimum_spanning_edges(graph: WeightedGraph, edges: Iterable[Edge]) -> list[Edge]:
    """Kruskal over the given edges with host weights; returns a spanning forest."""
    ranked = sorted((graph.weights[edge_key(u, v)], u, v) for u, v in edges)
    dsu = DisjointSets()
    chosen: list[Edge] = []
    for w, u, v in ranked:
        dsu.add(u)
        dsu.add(v)
        if dsu.union(u, v):
            chosen.append(edge_key(u, v))
    return chosen


def prune(instance: SteinerInstance, edges: Iterable[Edge]) -> SteinerSolution:
    """Canonical cleanup of an edge set into a pruned Steiner tree.

    Takes a minimum spanning forest of the selected subgraph, keeps the
    component holding the terminals and strips non-terminal leaves until
    every leaf is a terminal. Raises InfeasibleError when the edges do not
    connect all terminals.
    """
    g = instance.graph
    terms = instance.terminals
    es = {edge_key(u, v) for u, v in edges}
    for e in es:
        if e not in g.weights:
            raise ValidationError(f"edge {e} is not part of the instance graph")
    if not es:
        if len(terms) == 1:
            return SteinerSolution(frozenset(), 0)
        raise InfeasibleError("terminals are not connected by the given edges")

    forest = minimum_spanning_edges(g, es)
    dsu = DisjointSets()
    for u, v in forest:
        dsu.add(u)
        dsu.add(v)
        dsu.union(u, v)
    for t in terms:
        dsu.add(t)
    anchor = dsu.find(min(terms))
    if any(dsu.find(t) != anchor for t in terms):
        raise InfeasibleError("terminals are not connected by the given edges")

    adj: dict[int, set[int]] = {}
    for u, v in forest:
        if dsu.find(u) != anchor:
            continue
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    # strip non-terminal leaves until fixpoint
    stack = [v for v, nb in adj.items() if len(nb) <= 1 and v not in terms]
    while stack:
        v = stack.pop()
        nb = adj.get(v)
        if nb is None or len(nb) > 1 or v in terms:
            continue
        del adj[v]
        for u in nb:
            adj[u].discard(v)
            if len(adj[u]) <= 1 and u not in terms:
                stack.append(u)
    kept = {edge_key(u, v) for u, nb in adj.items() for v in nb}
    return SteinerSolution.from_edges(g, kept)
