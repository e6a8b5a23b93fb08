"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best of ``--repeat`` runs and checks that both
backends return the same answer.
"""
import argparse
import timeit

import numpy as np

from cdnlab import kernels
from cdnlab.topology import random_graph


def _matrix(n, seed):
    g = random_graph(n, 4.0 / n, seed)
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for (u, v), w in g.edges.items():
        d[u, v] = d[v, u] = w
    return d


def cases():
    fw = _matrix(300, 1)
    closed = fw.copy()
    kernels.backends()["python"].floyd_warshall(closed)
    small = _matrix(40, 2)
    kernels.backends()["python"].floyd_warshall(small)
    n = closed.shape[0]
    weights = np.ones(n)
    base = np.full(n, np.inf)
    sw = np.ones(small.shape[0])
    sbase = np.full(small.shape[0], np.inf)
    return {
        "floyd_warshall N=300": lambda k: k.floyd_warshall(fw.copy()) or "ok",
        "coverage_costs N=300": lambda k: tuple(k.coverage_costs(closed, weights, base,
                                                                 np.arange(n), 0)),
        "best_subset N=40 M=3": lambda k: k.best_subset(small, sw, sbase, np.arange(40),
                                                        3, 0, 1e-9)[:2],
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    found = kernels.backends()
    if "compiled" not in found:
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':<24}" + "".join(f"{name:>12}" for name in found) + f"{'speedup':>10}")
    for label, fn in cases().items():
        results, times = {}, {}
        for name, mod in found.items():
            results[name] = fn(mod)
            times[name] = min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat))
        if len(results) > 1:
            a, b = results["python"], results["compiled"]
            same = a == b if not isinstance(a, tuple) else str(a) == str(b)
            assert same, f"{label}: backends disagree"
        speed = (f"{times['python'] / times['compiled']:.1f}x"
                 if "compiled" in times else "-")
        print(f"{label:<24}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in found)
              + f"{speed:>10}")


if __name__ == "__main__":
    main()
