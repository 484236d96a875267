"""Pool generation: construction heuristic, local search, runs, pool files."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import build_instance, four_cycle, solution_of
from steinmerge import (
    GeneratorConfig,
    ParseError,
    ValidationError,
    dreyfus_wagner,
    generate_pool,
    local_search,
    read_pool,
    solution_violations,
    sph_construct,
    write_pool,
)
from steinmerge.generator import _derive_seed
from steinmerge.synth import random_connected_instance, sparse_instance


def rng_for(seed=0):
    return random.Random(seed)


class TestDerivedSeeds:
    def test_deterministic(self):
        assert _derive_seed(42, 3) == _derive_seed(42, 3)

    def test_runs_get_distinct_streams(self):
        seeds = {_derive_seed(0, i) for i in range(1000)}
        assert len(seeds) == 1000

    def test_fits_in_64_bits(self):
        for i in range(100):
            assert 0 <= _derive_seed(2**63, i) < 2**64


class TestConfig:
    def test_defaults(self):
        cfg = GeneratorConfig()
        assert (cfg.pool_size, cfg.iterations_per_run) == (16, 8)
        assert cfg.perturbation_strength == 0.2

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"pool_size": 0},
            {"iterations_per_run": 0},
            {"perturbation_strength": -0.1},
            {"perturbation_strength": 1.0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValidationError):
            GeneratorConfig(**kwargs)


class TestConstruction:
    def test_path_instance_exact(self):
        inst = build_instance(
            [(0, 1, 2), (1, 2, 3), (2, 3, 1)], [0, 3]
        )
        sol = sph_construct(inst, None, 0, rng_for())
        assert sol.weight == 6

    def test_single_terminal(self):
        inst = build_instance([(0, 1, 4)], [0])
        sol = sph_construct(inst, None, 0, rng_for())
        assert sol.edges == frozenset()

    def test_start_must_be_terminal(self):
        inst = build_instance([(0, 1, 4), (1, 2, 4)], [0, 2])
        with pytest.raises(ValidationError):
            sph_construct(inst, None, 1, rng_for())

    def test_output_is_valid_tree(self):
        for seed in range(15):
            inst = random_connected_instance(seed, 20, 40, 5, max_weight=50)
            start = min(inst.terminals)
            sol = sph_construct(inst, None, start, rng_for(seed))
            assert solution_violations(inst, sol) == []

    def test_within_twice_optimal(self):
        # the classic guarantee for path-joining construction
        for seed in range(20):
            inst = random_connected_instance(seed, 16, 32, 5, max_weight=40)
            opt = dreyfus_wagner(inst).weight
            sol = sph_construct(inst, None, min(inst.terminals), rng_for(seed))
            assert sol.weight <= 2 * opt

    def test_respects_perturbed_weights(self):
        # under inflated weight for the cheap edge, construction takes the
        # other route; reported weight still uses the originals
        inst = build_instance([(0, 1, 2), (0, 2, 3), (1, 2, 4)], [1, 2])
        fake = {(1, 2): 100.0, (0, 1): 1.0, (0, 2): 1.0}
        sol = sph_construct(inst, fake, 1, rng_for())
        assert sol.edges == frozenset({(0, 1), (0, 2)})
        assert sol.weight == 5


class TestLocalSearch:
    def test_never_increases_weight(self):
        for seed in range(15):
            inst = random_connected_instance(seed, 18, 36, 5, max_weight=30)
            rng = rng_for(seed)
            start = sph_construct(inst, None, min(inst.terminals), rng)
            improved = local_search(inst, start, rng)
            assert improved.weight <= start.weight
            assert solution_violations(inst, improved) == []

    def test_optimal_tree_is_fixed_point(self):
        for seed in range(10):
            inst = random_connected_instance(seed, 12, 22, 4, max_weight=25)
            opt = dreyfus_wagner(inst)
            assert local_search(inst, opt, rng_for(seed)).weight == opt.weight

    def test_escapes_heavy_edge_on_cycle(self):
        # the edge swap walks off the single heavy edge onto the cheap rim
        inst = four_cycle(heavy=10)
        start = solution_of(inst, [(0, 3)])
        assert start.weight == 10
        assert local_search(inst, start, rng_for()).weight == 3

    def test_removes_useless_steiner_vertex(self):
        # terminals 0,2 joined through 1 (cost 8) when a direct edge costs 5
        inst = build_instance([(0, 1, 4), (1, 2, 4), (0, 2, 5)], [0, 2])
        start = solution_of(inst, [(0, 1), (1, 2)])
        assert local_search(inst, start, rng_for()).weight == 5

    def test_inserts_profitable_steiner_vertex(self):
        # star center 3 beats the rim path connecting the three terminals
        inst = build_instance(
            [(0, 3, 1), (1, 3, 1), (2, 3, 1), (0, 1, 3), (1, 2, 3)], [0, 1, 2]
        )
        start = solution_of(inst, [(0, 1), (1, 2)])
        assert local_search(inst, start, rng_for()).weight == 3


class TestGeneratePool:
    def test_replay_is_bit_identical(self):
        inst = sparse_instance(1, 30, 5)
        cfg = GeneratorConfig(pool_size=6, iterations_per_run=3, seed=9)
        a = generate_pool(inst, cfg)
        b = generate_pool(inst, cfg)
        assert [e.solution.canonical_edges() for e in a.entries] == [
            e.solution.canonical_edges() for e in b.entries
        ]
        assert [(e.seed, e.run, e.iteration) for e in a.entries] == [
            (e.seed, e.run, e.iteration) for e in b.entries
        ]

    def test_workers_do_not_change_the_pool(self):
        inst = sparse_instance(2, 35, 6)
        cfg = GeneratorConfig(pool_size=8, iterations_per_run=2, seed=4)
        seq = generate_pool(inst, cfg)
        par = generate_pool(inst, cfg, workers=4)
        assert [e.solution.canonical_edges() for e in seq.entries] == [
            e.solution.canonical_edges() for e in par.entries
        ]

    def test_duplicates_collapse(self):
        # a tree instance admits exactly one Steiner tree per terminal set
        inst = build_instance([(0, 1, 1), (1, 2, 1), (2, 3, 1)], [0, 3])
        pool = generate_pool(
            inst, GeneratorConfig(pool_size=5, iterations_per_run=2)
        )
        assert len(pool) == 1
        assert pool.entries[0].run == 0

    def test_every_entry_is_locally_optimal_and_valid(self):
        inst = sparse_instance(3, 40, 6)
        pool = generate_pool(inst, GeneratorConfig(pool_size=5, iterations_per_run=2))
        for entry in pool.entries:
            assert solution_violations(inst, entry.solution) == []
            rerun = local_search(inst, entry.solution, rng_for(0))
            assert rerun.weight == entry.solution.weight

    def test_best_breaks_ties_by_position(self):
        inst = sparse_instance(4, 30, 5)
        pool = generate_pool(inst, GeneratorConfig(pool_size=6, iterations_per_run=2))
        best = pool.best_index()
        assert pool.weights[best] == min(pool.weights)
        assert all(w > pool.weights[best] for w in pool.weights[:best])

    @given(st.integers(0, 10**6))
    @settings(max_examples=15, deadline=None)
    def test_pool_never_beats_the_optimum(self, seed):
        inst = random_connected_instance(seed, 14, 26, 4, max_weight=20)
        pool = generate_pool(inst, GeneratorConfig(pool_size=4, iterations_per_run=2))
        assert min(pool.weights) >= dreyfus_wagner(inst).weight


class TestPoolFiles:
    def roundtrip(self, inst, cfg):
        pool = generate_pool(inst, cfg)
        again = read_pool(write_pool(pool), inst)
        assert [s.canonical_edges() for s in again.solutions] == [
            s.canonical_edges() for s in pool.solutions
        ]
        assert again.weights == pool.weights

    def test_roundtrip(self):
        self.roundtrip(
            sparse_instance(5, 30, 5), GeneratorConfig(pool_size=5, iterations_per_run=2)
        )

    def test_roundtrip_with_empty_tree(self):
        inst = build_instance([(0, 1, 4)], [0])
        self.roundtrip(inst, GeneratorConfig(pool_size=1, iterations_per_run=1))

    def test_missing_header(self):
        inst = four_cycle()
        with pytest.raises(ParseError):
            read_pool("tree 3 1 2\n", inst)

    def test_malformed_line(self):
        inst = four_cycle()
        with pytest.raises(ParseError) as err:
            read_pool("steinmerge-pool 1\ntree 3 1\n", inst)
        assert "line 2" in str(err.value)

    def test_vertex_out_of_range(self):
        inst = four_cycle()
        with pytest.raises(ParseError):
            read_pool("steinmerge-pool 1\ntree 3 1 9\n", inst)

    def test_wrong_stated_weight(self):
        inst = four_cycle()
        with pytest.raises(ValidationError):
            read_pool("steinmerge-pool 1\ntree 99 1 2 2 3 3 4\n", inst)

    def test_tree_must_span_terminals(self):
        inst = four_cycle()
        with pytest.raises(ValidationError):
            read_pool("steinmerge-pool 1\ntree 1 1 2\n", inst)

    def test_no_trees(self):
        inst = four_cycle()
        with pytest.raises(ParseError):
            read_pool("steinmerge-pool 1\n# empty\n", inst)

    def test_comments_and_duplicates_skipped(self):
        inst = four_cycle()
        text = (
            "steinmerge-pool 1\n"
            "# a remark\n"
            "tree 3 1 2 2 3 3 4\n"
            "tree 3 2 1 3 2 4 3\n"
        )
        pool = read_pool(text, inst)
        assert len(pool) == 1
        assert pool.weights == [3]
