"""Compare the compiled replicator kernel against the numpy fallback.

Usage: python benchmarks/bench_replicator.py [--sizes 5 10 20 50] [--steps 20000]
"""

import argparse
import time

import numpy as np

from mskkt import _core_py
from mskkt.graph import Graph
from mskkt.replicator import payoff_matrix

try:
    from mskkt import _core
except ImportError:
    _core = None


def random_graph(n: int, rng: np.random.Generator) -> Graph:
    return Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < 0.5])


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 50])
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _core is None:
        print("compiled extension not built; run `python setup.py build_ext --inplace` first")
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>4} {'steps':>7} {'python [s]':>11} {'compiled [s]':>13} {'speedup':>8} {'max |dx|':>10}")
    for n in args.sizes:
        m = payoff_matrix(random_graph(n, rng), 0.5)
        x0 = rng.dirichlet(np.ones(n))
        call = (m, x0, 0.01, args.steps, 0.0, args.steps)
        t_py = best_of(lambda: _core_py.integrate_rk4(*call), args.repeats)
        if _core is None:
            print(f"{n:>4} {args.steps:>7} {t_py:>11.3f} {'-':>13} {'-':>8} {'-':>10}")
            continue
        t_c = best_of(lambda: _core.integrate_rk4(*call), args.repeats)
        diff = np.max(np.abs(_core.integrate_rk4(*call)[0][-1] - _core_py.integrate_rk4(*call)[0][-1]))
        print(f"{n:>4} {args.steps:>7} {t_py:>11.3f} {t_c:>13.4f} {t_py / t_c:>7.1f}x {diff:>10.1e}")


if __name__ == "__main__":
    main()
