"""Shared builders and miniature oracles for the test suite."""

from __future__ import annotations

from itertools import combinations

from steinmerge import SteinerInstance, SteinerSolution, WeightedGraph


def build_instance(edges, terminals, extra_vertices=(), name="t"):
    """Instance from (u, v, w) triples; vertex set inferred from the edges."""
    verts = {v for u, v, _ in edges for v in (u,)} | {v for _, v, _ in edges}
    verts |= set(extra_vertices)
    graph = WeightedGraph.build(verts, edges)
    return SteinerInstance.create(graph, terminals, name)


def solution_of(instance, edges):
    return SteinerSolution.from_edges(instance.graph, edges)


def four_cycle(heavy=10):
    """Cycle 0-1-2-3-0 with one heavy edge (0,3); terminals are its endpoints."""
    return build_instance(
        [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, heavy)], [0, 3]
    )


def brute_force_weight(instance):
    """Minimum Steiner tree weight by exhaustive edge-subset search.

    Only usable on tiny instances (cost 2^|E|). Returns the optimal weight.
    """
    g = instance.graph
    terms = instance.terminals
    if len(terms) == 1:
        return 0
    edges = sorted(g.weights)
    best = None
    # every acyclic terminal-spanning subset is a candidate; sizes range
    # from |Q|-1 up to |V|-1 and a bigger tree can still be lighter
    for size in range(len(terms) - 1, g.n_vertices):
        for combo in combinations(edges, size):
            verts = {v for e in combo for v in e}
            if not terms <= verts:
                continue
            parent = {v: v for v in verts}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            acyclic = True
            for u, v in combo:
                ru, rv = find(u), find(v)
                if ru == rv:
                    acyclic = False
                    break
                parent[ru] = rv
            if not acyclic:
                continue
            anchor = find(next(iter(terms)))
            if any(find(t) != anchor for t in terms):
                continue
            w = g.total_weight(combo)
            if best is None or w < best:
                best = w
    if best is None:
        raise AssertionError("no spanning subtree found")
    return best


def path_distance(instance, a, b):
    """Shortest-path distance inside the instance graph."""
    from steinmerge import shortest_paths

    return shortest_paths(instance.graph, a)[b][0]
