"""Elimination orders, decompositions, the nice refinement, and .td files."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import build_instance
from steinmerge import (
    ParseError,
    ValidationError,
    WeightedGraph,
    decomposition_from_order,
    greedy_degree,
    greedy_degree_capped,
    make_nice,
    read_td,
    validate_decomposition,
    validate_nice,
    write_td,
)
from steinmerge.synth import (
    clique_instance,
    cycle_instance,
    random_connected_instance,
)
from steinmerge.treewidth import (
    FORGET,
    INTRODUCE,
    INTRODUCE_EDGE,
    LEAF,
    TreeDecomposition,
)


def path_graph(n):
    return WeightedGraph.build(
        range(n), [(i, i + 1, 1) for i in range(n - 1)]
    )


class TestGreedyDegree:
    def test_single_vertex(self):
        g = WeightedGraph(frozenset([7]), {})
        order = greedy_degree(g)
        assert order.order == (7,)
        assert order.width == 0

    def test_path_width_one(self):
        order = greedy_degree(path_graph(6))
        assert order.width == 1
        assert sorted(order.order) == list(range(6))

    def test_cycle_width_two(self):
        g = cycle_instance(8).graph
        assert greedy_degree(g).width == 2

    def test_clique_width(self):
        g = clique_instance(6).graph
        assert greedy_degree(g).width == 5

    def test_tie_breaks_low_by_default(self):
        # all degrees equal on a cycle, so the order starts at vertex 0
        g = cycle_instance(5).graph
        assert greedy_degree(g).order[0] == 0
        assert greedy_degree(g, tie="high").order[0] == 4

    def test_bad_tie_rule(self):
        with pytest.raises(ValueError):
            greedy_degree(path_graph(3), tie="middle")

    def test_capped_accepts_within_cap(self):
        res = greedy_degree_capped(cycle_instance(10).graph, 2)
        assert not res.exceeded
        assert res.width == 2

    def test_capped_aborts_above_cap(self):
        res = greedy_degree_capped(clique_instance(6).graph, 3)
        assert res.exceeded
        assert res.order is None
        assert res.width > 3

    def test_capped_matches_full_when_within(self):
        g = random_connected_instance(3, 15, 25, 4).graph
        full = greedy_degree(g)
        capped = greedy_degree_capped(g, full.width)
        assert capped.order == full.order
        assert capped.width == full.width

    def test_negative_cap_rejected(self):
        with pytest.raises(ValueError):
            greedy_degree_capped(path_graph(3), -1)


class TestDecomposition:
    def test_path_decomposition_valid(self):
        g = path_graph(5)
        td = decomposition_from_order(g, greedy_degree(g))
        assert validate_decomposition(g, td) == []
        assert td.width == 1

    def test_order_must_be_permutation(self):
        g = path_graph(3)
        with pytest.raises(ValidationError):
            decomposition_from_order(g, [0, 1])

    def test_validator_flags_uncovered_edge(self):
        g = path_graph(3)
        td = TreeDecomposition(
            (frozenset([0, 1]), frozenset([2])), ((0, 1),), 1
        )
        assert any("edge (1, 2)" in v for v in validate_decomposition(g, td))

    def test_validator_flags_missing_vertex(self):
        g = path_graph(3)
        td = TreeDecomposition((frozenset([0, 1]),), (), 1)
        assert any("vertices in no bag" in v for v in validate_decomposition(g, td))

    def test_validator_flags_disconnected_occurrence(self):
        g = path_graph(3)
        td = TreeDecomposition(
            (frozenset([0, 1]), frozenset([1, 2]), frozenset([0, 2])),
            ((0, 1), (1, 2)),
            1,
        )
        problems = validate_decomposition(g, td)
        assert any("not connected" in v for v in problems)

    def test_validator_flags_wrong_width_field(self):
        g = path_graph(3)
        td = decomposition_from_order(g, greedy_degree(g))
        lying = TreeDecomposition(td.bags, td.tree_edges, td.width + 1)
        assert any("width field" in v for v in validate_decomposition(g, lying))

    @given(st.integers(0, 100_000))
    @settings(max_examples=60, deadline=None)
    def test_random_graphs_always_valid(self, seed):
        inst = random_connected_instance(seed, 16, 30, 3)
        for tie in ("low", "high"):
            td = decomposition_from_order(inst.graph, greedy_degree(inst.graph, tie))
            assert validate_decomposition(inst.graph, td) == []


class TestNiceForm:
    def test_single_edge_shape(self):
        inst = build_instance([(0, 1, 3)], [0, 1])
        td = decomposition_from_order(inst.graph, greedy_degree(inst.graph))
        nice = make_nice(inst.graph, td, 0)
        kinds = [nd.kind for nd in nice.nodes]
        assert kinds == [LEAF, INTRODUCE, INTRODUCE_EDGE, FORGET]
        assert nice.nodes[-1].bag == (0,)
        assert validate_nice(inst.graph, nice) == []

    def test_every_edge_introduced_once(self):
        inst = random_connected_instance(11, 14, 26, 4)
        td = decomposition_from_order(inst.graph, greedy_degree(inst.graph))
        nice = make_nice(inst.graph, td, min(inst.terminals))
        introduced = [nd.edge for nd in nice.nodes if nd.kind == INTRODUCE_EDGE]
        assert sorted(introduced) == sorted(inst.graph.edges)
        assert validate_nice(inst.graph, nice) == []

    def test_width_inflation_at_most_one(self):
        for seed in range(20):
            inst = random_connected_instance(seed, 18, 35, 4)
            td = decomposition_from_order(inst.graph, greedy_degree(inst.graph))
            nice = make_nice(inst.graph, td, min(inst.terminals))
            assert nice.width <= td.width + 1

    def test_pinned_vertex_everywhere(self):
        inst = random_connected_instance(5, 12, 20, 3)
        root = min(inst.terminals)
        td = decomposition_from_order(inst.graph, greedy_degree(inst.graph))
        nice = make_nice(inst.graph, td, root)
        assert all(root in nd.bag for nd in nice.nodes)

    def test_root_vertex_must_exist(self):
        inst = build_instance([(0, 1, 1)], [0, 1])
        td = decomposition_from_order(inst.graph, greedy_degree(inst.graph))
        with pytest.raises(ValidationError):
            make_nice(inst.graph, td, 99)

    def test_large_chain_no_recursion_blowup(self):
        # a long path produces a decomposition chain far past the default
        # recursion limit; the refinement must stay iterative
        g = path_graph(4000)
        td = decomposition_from_order(g, greedy_degree(g))
        nice = make_nice(g, td, 0)
        assert validate_nice(g, nice) == []

    def test_validator_catches_bad_root(self):
        inst = build_instance([(0, 1, 1)], [0, 1])
        td = decomposition_from_order(inst.graph, greedy_degree(inst.graph))
        nice = make_nice(inst.graph, td, 0)
        broken = nice.__class__(nice.nodes[:-1], nice.root_vertex, nice.width)
        assert validate_nice(inst.graph, broken)


class TestTdFormat:
    def test_roundtrip(self):
        g = random_connected_instance(2, 10, 18, 3).graph
        td = decomposition_from_order(g, greedy_degree(g))
        again = read_td(write_td(td, g.n_vertices))
        assert again.bags == td.bags
        assert sorted(again.tree_edges) == sorted(td.tree_edges)
        assert again.width == td.width
        assert validate_decomposition(g, again) == []

    def test_read_requires_solution_line(self):
        with pytest.raises(ParseError):
            read_td("b 1 1 2\n")

    def test_read_skips_comments(self):
        td = read_td("c a comment\ns td 1 2 2\nb 1 1 2\n")
        assert td.bags == (frozenset({0, 1}),)
        assert td.width == 1

    def test_read_bag_id_out_of_range(self):
        with pytest.raises(ParseError):
            read_td("s td 1 2 2\nb 5 1 2\n")

    def test_header_width_preserved_for_validation(self):
        # a lying header width must survive parsing so validation can flag it
        g = path_graph(2)
        td = read_td("s td 1 2 2\nb 1 1 2\n")
        ok = validate_decomposition(g, td)
        assert ok == []
        lying = read_td("s td 1 3 2\nb 1 1 2\n")
        assert any("width field" in v for v in validate_decomposition(g, lying))
