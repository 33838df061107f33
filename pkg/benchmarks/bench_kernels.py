"""Benchmark the compiled kernels against the pure numpy lane.

Runs each kernel on workload-shaped inputs (walk tracking, dense
convolution, tuple-graph power iteration) and prints median wall times
plus the speedup. Usage:

    python3 benchmarks/bench_kernels.py [--repeats 7]
"""

import argparse
import statistics
import time

import numpy as np

from permword.kernels import pure

try:
    from permword import _ckernels
except ImportError:
    _ckernels = None


def timed(fn, repeats):
    best = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best.append(time.perf_counter() - t0)
    return statistics.median(best)


def workloads(rng):
    n = 100
    tables = np.stack([rng.permutation(n) for _ in range(5)]).astype(np.int32)
    symbols = rng.integers(0, 5, size=(512, 400))
    points = np.arange(n, dtype=np.int32)

    size = 20_160  # |Alt(8)|
    idx = np.stack([rng.permutation(size) for _ in range(12)]).astype(np.int32)
    probs = rng.dirichlet(np.ones(12))
    dist = rng.dirichlet(np.ones(size))

    verts = 12_144  # injective 3-tuples at n = 24
    nbrs = np.stack([rng.permutation(verts) for _ in range(4)]).astype(np.int32)
    f = rng.standard_normal(verts)

    return [
        ("track_points 512x400 walks, n=100", "track_points", (tables, symbols, points)),
        ("convolve_steps 12 atoms x 20160, 50 steps", "convolve_steps", (dist, idx, probs, 50)),
        ("adjacency_apply 12144 vertices x 200", "adjacency_apply_loop", (f, nbrs)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    rows = []
    for label, kernel, inputs in workloads(rng):
        impls = {"python": pure}
        if _ckernels is not None:
            impls["c"] = _ckernels

        def call(mod):
            if kernel == "adjacency_apply_loop":
                def run():
                    out = inputs[0]
                    for _ in range(200):
                        out = mod.adjacency_apply(out, inputs[1])
                    return out
                return run
            fn = getattr(mod, kernel)
            return lambda: fn(*inputs)

        times = {name: timed(call(mod), args.repeats) for name, mod in impls.items()}
        if _ckernels is not None:
            outs = {name: call(mod)() for name, mod in impls.items()}
            assert np.array_equal(outs["python"], outs["c"]), f"lane mismatch: {label}"
        rows.append((label, times))

    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'python':>10}  {'c':>10}  {'speedup':>8}")
    for label, times in rows:
        py = times["python"]
        if "c" in times:
            c = times["c"]
            print(f"{label:<{width}}  {py * 1e3:>8.2f}ms  {c * 1e3:>8.2f}ms  {py / c:>7.1f}x")
        else:
            print(f"{label:<{width}}  {py * 1e3:>8.2f}ms  {'absent':>10}  {'-':>8}")
    if _ckernels is None:
        print("\ncompiled extension not importable; only the pure lane was timed")


if __name__ == "__main__":
    main()
