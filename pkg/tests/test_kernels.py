"""The compiled and fallback kernels must agree exactly."""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from hyperturan import _kernels as kn
from hyperturan.hypercore import RGraph

pytestmark = pytest.mark.skipif(kn.numba is None, reason="numba not installed")


def _random_masks(rng, n, r, m):
    cand = list(itertools.combinations(range(1, n + 1), r))
    picks = rng.choice(len(cand), size=min(m, len(cand)), replace=False)
    return RGraph(n, r, [cand[i] for i in picks]).edge_masks()


KINDS = [(kn.DELTA, 0), (kn.C_FAMILY, 0), (kn.T_FAMILY, 0), (kn.WEAK, 0), (kn.SINGLE, 1), (kn.SINGLE, 2)]


@pytest.mark.parametrize("kind,i", KINDS)
def test_scan_and_conflict_agree(kind, i):
    rng = np.random.default_rng(kind * 10 + i)
    for _ in range(15):
        r = int(rng.integers(3, 5))
        if kind == kn.SINGLE and i > (r + 1) // 2:
            continue
        masks = _random_masks(rng, int(rng.integers(r + 1, 9)), r, int(rng.integers(3, 14)))
        assert np.array_equal(kn.scan_triples_numba(masks, kind, r, i), kn.scan_triples_numpy(masks, kind, r, i))
        assert np.array_equal(kn.conflict_table_numba(masks, kind, r, i),
                              kn.conflict_table_numpy(masks, kind, r, i))


def test_dfs_agrees():
    masks = RGraph(6, 3, itertools.combinations(range(1, 7), 3)).edge_masks()
    for kind in (kn.C_FAMILY, kn.T_FAMILY, kn.WEAK):
        conf = kn.conflict_table_numba(masks, kind, 3, 0)
        a = kn.extremal_dfs_numba(conf, len(masks), 0)
        b = kn.extremal_dfs_python(conf, len(masks), 0)
        assert a[0] == b[0] and sorted(a[1]) == sorted(b[1]) and a[2:] == b[2:]


def test_poly_kernels_agree():
    rng = np.random.default_rng(1)
    for _ in range(20):
        r = int(rng.integers(2, 5))
        n = int(rng.integers(r, 9))
        cand = list(itertools.combinations(range(n), r))
        edges = np.array([cand[k] for k in rng.choice(len(cand), size=min(6, len(cand)), replace=False)])
        x = rng.dirichlet(np.ones(n))
        assert kn.eval_poly_numba(edges, x) == pytest.approx(kn.eval_poly_numpy(edges, x), abs=1e-16)
        np.testing.assert_allclose(kn.grad_poly_numba(edges, x), kn.grad_poly_numpy(edges, x), atol=1e-15)
        np.testing.assert_allclose(kn.hess_poly_numba(edges, x), kn.hess_poly_numpy(edges, x), atol=1e-15)


def test_orbit_reps_agree():
    n, r = 5, 3
    cand = list(itertools.combinations(range(1, n + 1), r))
    index = {e: k for k, e in enumerate(cand)}
    perms = np.array([[index[tuple(sorted(p[v - 1] for v in e))] for e in cand]
                      for p in itertools.permutations(range(1, n + 1))])
    assert kn.orbit_reps_numba(perms, len(cand)) == kn.orbit_reps_numpy(perms, len(cand))


def test_env_flag_selects_fallback():
    code = "from hyperturan import _kernels as k; print(k.NUMBA_ENABLED, k.extremal_dfs.__name__)"
    env = {**os.environ, "HYPERTURAN_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "extremal_dfs_python"]
