"""Time the numba kernels against the numpy/Python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Compilation happens in a warm-up call that is not timed. Each row also
checks that both paths return the same answer.
"""

from __future__ import annotations

import argparse
import itertools
import timeit

import numpy as np

from hyperturan import _kernels as kn
from hyperturan.extremal import gen_turan
from hyperturan.hypercore import RGraph, complete_graph


def _cases():
    k6 = complete_graph(6, 3).edge_masks()
    k7_2 = complete_graph(7, 2).edge_masks()
    t = gen_turan(12, 3).edge_masks()
    conf6 = kn.conflict_table_numba(k6, kn.C_FAMILY, 3, 0)
    conf7 = kn.conflict_table_numba(k7_2, kn.DELTA, 2, 0)
    rng = np.random.default_rng(0)
    cand = np.array(list(itertools.combinations(range(12), 4)))
    edges = cand[rng.choice(len(cand), 300, replace=False)]
    x = rng.dirichlet(np.ones(12))
    n, r = 6, 3
    c = list(itertools.combinations(range(1, n + 1), r))
    idx = {e: k for k, e in enumerate(c)}
    perms = np.array([[idx[tuple(sorted(p[v - 1] for v in e))] for e in c]
                      for p in itertools.permutations(range(1, n + 1))])
    return [
        ("scan_triples T3(12) tfam (free)", kn.scan_triples_numba, kn.scan_triples_numpy, (t, kn.T_FAMILY, 3, 0)),
        ("conflict_table K6^3 cfam", kn.conflict_table_numba, kn.conflict_table_numpy, (k6, kn.C_FAMILY, 3, 0)),
        ("extremal_dfs K6^3 cfam", kn.extremal_dfs_numba, kn.extremal_dfs_python, (conf6, len(k6), 0)),
        ("extremal_dfs K7 triangle", kn.extremal_dfs_numba, kn.extremal_dfs_python, (conf7, len(k7_2), 0)),
        ("grad_poly 300 4-edges", kn.grad_poly_numba, kn.grad_poly_numpy, (edges, x)),
        ("hess_poly 300 4-edges", kn.hess_poly_numba, kn.hess_poly_numpy, (edges, x)),
        ("orbit_reps 3-graphs n=6", kn.orbit_reps_numba, kn.orbit_reps_numpy, (perms, len(c))),
    ]


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return a[0] == b[0] and sorted(a[1]) == sorted(b[1]) and a[2:] == b[2:]
    return bool(np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), atol=1e-12))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':34} {'numba ms':>10} {'fallback ms':>12} {'speedup':>8}  agree")
    for name, fast, slow, argv in _cases():
        ra, rb = fast(*argv), slow(*argv)  # warm-up, also compiles
        t_fast = min(timeit.repeat(lambda: fast(*argv), number=1, repeat=args.repeat)) * 1e3
        t_slow = min(timeit.repeat(lambda: slow(*argv), number=1, repeat=max(1, args.repeat // 2))) * 1e3
        print(f"{name:34} {t_fast:10.3f} {t_slow:12.3f} {t_slow / t_fast:8.1f}x  {_same(ra, rb)}")


if __name__ == "__main__":
    main()
