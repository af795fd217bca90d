"""Benchmark: compiled attractor kernel vs the NumPy fallback.

Builds the successor tables once per instance, then times both backends on
the same arrays and checks they return identical losing sets and ranks.

    python3 benchmarks/bench_attractor.py
"""

import time

import numpy as np

from revspy._core import BACKEND, pure

try:
    from revspy._core import _attractor

    compiled = _attractor.attractor
except ImportError:
    compiled = None

from revspy.engine import GameConfig
from revspy.families import cycle_graph, unicyclic_graphs
from revspy.solver import ConfigSpace, _bad_matrix


INSTANCES = [
    ("C5 m=2 r=7 s=3", cycle_graph(5), 2, 7, 3),
    ("C6 m=2 r=7 s=3", cycle_graph(6), 2, 7, 3),
    ("C6 m=2 r=7 s=4", cycle_graph(6), 2, 7, 4),
    ("U5.2 m=2 r=7 s=4", unicyclic_graphs(5, 2)[0], 2, 7, 4),
]


def build(g, cfg):
    rev = ConfigSpace(g, cfg.r)
    spy = ConfigSpace(g, cfg.s)
    rev.build_successors()
    spy.build_successors()
    bad = _bad_matrix(rev.configs, spy.configs, cfg.m)
    return rev, spy, bad


def run(kernel, rev, spy, bad, repeats=3):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = kernel(rev.indptr, rev.indices, spy.indptr, spy.indices, bad, rev.size, spy.size)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    print(f"selected backend: {BACKEND}")
    print(f"{'instance':24} {'states':>9} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    for name, g, m, r, s in INSTANCES:
        cfg = GameConfig(m=m, r=r, s=s)
        rev, spy, bad = build(g, cfg)
        states = 2 * rev.size * spy.size
        t_pure, out_pure = run(pure.attractor, rev, spy, bad)
        if compiled is None:
            print(f"{name:24} {states:>9} {t_pure * 1e3:>8.1f}ms {'n/a':>10} {'n/a':>8}")
            continue
        t_cy, out_cy = run(compiled, rev, spy, bad)
        for a, b in zip(out_pure, out_cy):
            assert np.array_equal(a, b), "backends disagree"
        print(
            f"{name:24} {states:>9} {t_pure * 1e3:>8.1f}ms {t_cy * 1e3:>8.1f}ms {t_pure / t_cy:>7.1f}x"
        )


if __name__ == "__main__":
    main()
