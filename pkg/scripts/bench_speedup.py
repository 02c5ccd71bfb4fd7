"""Time the contracted pipeline against the full-graph layout baseline over a
range of graph sizes. JIT compilation is excluded by a warmup pass.

Usage: python scripts/bench_speedup.py [--sizes 50,100,200] [--workers 4]
"""

import argparse
import os
import sys
import tempfile
import time

import numpy as np

import commviz as cv


def planted(seed, cliques, size=32, bridges_per_clique=4):
    rng = np.random.default_rng(seed)
    edges = []
    for c in range(cliques):
        base = c * size
        for i in range(size):
            for j in range(i + 1, size):
                edges.append((base + i, base + j))
    for _ in range(bridges_per_clique * cliques):
        a, b = rng.choice(cliques, size=2, replace=False)
        edges.append((int(a * size + rng.integers(size)),
                      int(b * size + rng.integers(size))))
    return cv.from_edge_array(np.array(edges, dtype=np.int64))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="50,100,200",
                    help="comma-separated clique counts (32 nodes each)")
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    cv.warmup_jit()
    print(f"{'cliques':>8} {'nodes':>8} {'edges':>9} "
          f"{'pipeline_s':>11} {'full_s':>9} {'speedup':>8}")
    for cliques in sizes:
        g = planted(0, cliques)
        with tempfile.TemporaryDirectory() as td:
            path = os.path.join(td, "g.txt")
            cv.write_edge_list(g, path)
            t0 = time.perf_counter()
            cv.run_pipeline(cv.PipelineConfig(
                input=path, outdir=os.path.join(td, "p"),
                workers=args.workers, seed=0, iterations=100))
            t_pipe = time.perf_counter() - t0
            t0 = time.perf_counter()
            cv.run_pipeline(cv.PipelineConfig(
                input=path, outdir=os.path.join(td, "f"),
                workers=args.workers, seed=0, mode="full",
                full_iterations=500))
            t_full = time.perf_counter() - t0
        print(f"{cliques:>8} {g.node_count:>8} {g.edge_count:>9} "
              f"{t_pipe:>11.2f} {t_full:>9.2f} {t_full / t_pipe:>8.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
