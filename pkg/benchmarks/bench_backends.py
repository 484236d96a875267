"""Time the pure-Python kernels against the compiled ones.

Every workload runs under both backends; the outputs must match exactly
before a timing is reported. Run from the repository root:

    python3 benchmarks/bench_backends.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import statistics
import time
from contextlib import contextmanager

from steinmerge import (
    GeneratorConfig,
    MergeConfig,
    generate_pool,
    kernels,
    run_smh,
    solve_with_decomposition,
)
from steinmerge.synth import (
    dense_instance,
    grid_with_holes,
    random_connected_instance,
)
from steinmerge.treewidth import _adjacency_masks

_KERNEL_NAMES = [
    "eliminate",
    "elimination_bags",
    "dijkstra_multi",
    "canon_labels",
    "dp_leaf",
    "dp_introduce_vertex",
    "dp_introduce_edge",
    "dp_forget",
    "dp_join",
]


@contextmanager
def use_backend(name: str):
    """Temporarily rebind the dispatch module to one backend."""
    mod = kernels.load_backend(name)
    saved = {fn: getattr(kernels, fn) for fn in _KERNEL_NAMES}
    for fn in _KERNEL_NAMES:
        setattr(kernels, fn, getattr(mod, fn))
    try:
        yield
    finally:
        for fn, impl in saved.items():
            setattr(kernels, fn, impl)


def timed(fn, repeat):
    """Median wall time and the (identical) result of repeat calls."""
    results = []
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        results.append(fn())
        times.append(time.perf_counter() - t0)
    return statistics.median(times), results[0]


def workloads():
    grid = grid_with_holes(0, 40, 40, hole_fraction=0.1, n_terminals=40)
    dense = dense_instance(0, 300, 0.1, 20)
    _, _, grid_masks = _adjacency_masks(grid.graph)
    _, _, dense_masks = _adjacency_masks(dense.graph)
    grid_order = kernels.eliminate(grid_masks, -1, False)[1]
    order, index, indptr, nbrs, wts = grid.graph.csr
    sources = sorted(index[t] for t in grid.terminals)
    dp_inst = random_connected_instance(9, 60, 92, 8, max_weight=50)
    merge_inst = grid_with_holes(1, 18, 18, hole_fraction=0.15, n_terminals=14)

    yield "eliminate, grid %d vertices" % grid.graph.n_vertices, (
        lambda: kernels.eliminate(grid_masks, -1, False)
    )
    yield "eliminate, dense %d vertices" % dense.graph.n_vertices, (
        lambda: kernels.eliminate(dense_masks, -1, False)
    )
    yield "elimination bags, grid", (
        lambda: kernels.elimination_bags(grid_masks, grid_order)
    )
    yield "dijkstra, grid, %d sources" % len(sources), (
        lambda: kernels.dijkstra_multi(indptr, nbrs, wts, sources, len(order))
    )
    yield "dp solve, 60 vertices width %d" % _width_of(dp_inst), (
        lambda: solve_with_decomposition(dp_inst).weight
    )
    yield "full pipeline, 18x18 grid", lambda: _pipeline(merge_inst)


def _width_of(inst):
    from steinmerge import greedy_degree

    return greedy_degree(inst.graph).width


def _pipeline(inst):
    pool = generate_pool(
        inst, GeneratorConfig(pool_size=6, iterations_per_run=2, seed=0)
    )
    rep = run_smh(
        inst,
        pool,
        MergeConfig(final_width=6, rank_width=4, rank_iterations=4, seed=0),
    )
    return rep.weight, rep.solution.canonical_edges()


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="runs per timing (median)")
    args = ap.parse_args()

    backends = kernels.available_backends()
    if len(backends) < 2:
        print("compiled backend not available; nothing to compare")
        return 1

    rows = []
    for label, fn in workloads():
        outputs = {}
        timings = {}
        for backend in backends:
            with use_backend(backend):
                timings[backend], outputs[backend] = timed(fn, args.repeat)
        first, *rest = backends
        for other in rest:
            assert outputs[other] == outputs[first], f"{label}: backends disagree"
        rows.append((label, timings["python"], timings["cython"]))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload'.ljust(width)}  {'python':>10}  {'cython':>10}  {'speedup':>7}")
    for label, t_py, t_cy in rows:
        speedup = t_py / t_cy if t_cy > 0 else float("inf")
        print(f"{label.ljust(width)}  {t_py:>9.4f}s  {t_cy:>9.4f}s  {speedup:>6.2f}x")
    print("\nall workloads produced identical results under both backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
