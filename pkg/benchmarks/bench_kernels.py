"""Time the numba kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py [--repeat N]

Both variants run in one process by swapping the dispatch targets in
``lfpoly.kernels``; results are checked for equality before timing.
"""
import argparse
import time
from contextlib import contextmanager

from lfpoly import kernels
from lfpoly.bell import ld_vertices, ns_hrep
from lfpoly.polytope import facet_enum, vertex_enum
from lfpoly.polytope.symmetry import Canonicalizer, SymmetryGroup
from lfpoly.scenario import Scenario

BACKENDS = {
    "numba": (kernels._adjacent_pairs_numba, kernels._orbit_images_numba),
    "numpy": (kernels._adjacent_pairs_numpy, kernels._orbit_images_numpy),
}


@contextmanager
def backend(name):
    saved = kernels.adjacent_pairs, kernels._orbit_images_fast
    kernels.adjacent_pairs, kernels._orbit_images_fast = BACKENDS[name]
    try:
        yield
    finally:
        kernels.adjacent_pairs, kernels._orbit_images_fast = saved


def ns_3322():
    return vertex_enum(ns_hrep(Scenario.homogeneous(3, 2, 3, 2)))


def ld_3322_facets():
    return facet_enum(ld_vertices(Scenario.homogeneous(3, 2, 3, 2)))


_S = Scenario.homogeneous(3, 2, 3, 2)
_CANON = Canonicalizer(SymmetryGroup.for_scenario(_S))
_ROWS = None


def canonical_forms():
    return sorted({_CANON.canonical(f) for f in _ROWS})


TASKS = [
    ("vertex_enum NS(3322)", ns_3322),
    ("facet_enum LD(3322)", ld_3322_facets),
    ("canonical forms of 684 facets", canonical_forms),
]


def best_of(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    global _ROWS
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    _ROWS = ld_3322_facets().inequalities
    # warm up the JIT so compile time is not measured
    with backend("numba"):
        canonical_forms()
        ns_3322()
    print(f"{'task':34s} {'numba':>9s} {'numpy':>9s} {'ratio':>7s}")
    for name, fn in TASKS:
        res = {}
        times = {}
        for b in BACKENDS:
            with backend(b):
                times[b], res[b] = best_of(fn, args.repeat)
        assert res["numba"] == res["numpy"], f"backends disagree on {name}"
        print(f"{name:34s} {times['numba']:8.3f}s {times['numpy']:8.3f}s {times['numpy'] / times['numba']:6.1f}x")


if __name__ == "__main__":
    main()
