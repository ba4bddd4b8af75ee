"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Both backends are imported directly, so the environment switch is not needed.
The script also checks that the two return identical results.
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from npsupport import _pykernels
from npsupport.generators import gen_clique_system, random_maximal_outerplanar

try:
    from npsupport import _kernels as compiled
except ImportError:
    compiled = None


def masks_of(g):
    out = []
    for v in g.vertices:
        m = 0
        for w in g.adjacency[v]:
            m |= 1 << w
        out.append(m)
    return out


def timed(fn, repeat):
    runs = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        runs.append(time.perf_counter() - start)
    return statistics.median(runs), result


def workloads(seed: int):
    rng = random.Random(seed)
    tw_graphs = [random_maximal_outerplanar(n, rng) for n in (12, 14, 16)]
    tw_graphs.append(gen_clique_system(3, 16, 1, seed=seed).graph)
    big = gen_clique_system(4, 3000, 1, seed=seed).graph
    subsets = [frozenset(rng.sample(range(big.vertex_count), 40)) for _ in range(2000)]
    subsets += [frozenset(range(i, i + 200)) for i in range(0, 2800, 7)]

    def conn(mod):
        return lambda: [mod.subset_connected(big.adjacency, s) for s in subsets]

    yield "subset_connected x%d" % len(subsets), conn(_pykernels), conn(compiled) if compiled else None
    for g in tw_graphs:
        masks = masks_of(g)
        n = g.vertex_count

        def tw(mod, masks=masks, n=n):
            return lambda: mod.treewidth_dp(masks, n)[0]

        yield f"treewidth_dp n={n}", tw(_pykernels), tw(compiled) if compiled else None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'workload':28s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, py_fn, c_fn in workloads(args.seed):
        py_t, py_r = timed(py_fn, args.repeat)
        if c_fn is None:
            print(f"{name:28s} {py_t * 1e3:10.2f} {'n/a':>10s} {'n/a':>8s}")
            continue
        c_t, c_r = timed(c_fn, args.repeat)
        if c_r != py_r:
            raise SystemExit(f"backends disagree on {name}")
        print(f"{name:28s} {py_t * 1e3:10.2f} {c_t * 1e3:10.2f} {py_t / c_t:7.1f}x")


if __name__ == "__main__":
    main()
