"""Hot inner loops, compiled with numba when available.

Every kernel exists twice: a numba ``@njit`` version written as explicit
loops, and a fallback written with vectorised numpy (or plain Python where
the loop is inherently sequential). The numba path is used unless numba is
missing or ``HYPERTURAN_DISABLE_NUMBA`` is set to a non-empty value other
than ``0``. Both paths must return identical results; the test suite and
``benchmarks/bench_kernels.py`` compare them.

Edge sets are passed as ``uint64`` vertex bitmasks (bit ``v - 1`` for vertex
``v``), so kernels need ``n <= 64``. Edge-subset masks in the extremal DFS
need at most 64 candidate edges.
"""

from __future__ import annotations

import itertools
import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_flag = os.environ.get("HYPERTURAN_DISABLE_NUMBA", "")
NUMBA_ENABLED = numba is not None and _flag in ("", "0")

# pattern kinds shared with families.PatternKind
DELTA, C_FAMILY, T_FAMILY, WEAK, SINGLE = 0, 1, 2, 3, 4

_ROLES = np.array(list(itertools.permutations(range(3))), dtype=np.int64)


def _maybe_njit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# --- bit helpers -------------------------------------------------------------

def _popcount_loop(x):
    x = np.uint64(x)
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


_popcount_nb = _maybe_njit(_popcount_loop)


def _ordered_match_loop(a, b, c, kind, i):
    """Pattern predicate for one role assignment (A, B, C) = (a, b, c)."""
    zero = np.uint64(0)
    if kind == C_FAMILY:
        return ((a ^ b) & ~c) == zero
    if kind == T_FAMILY:
        return (a & ~(b | c)) == zero and (b & c & ~a) != zero
    if kind == WEAK:
        d = a ^ b
        return 2 * _popcount_nb(c & d) > _popcount_nb(d)
    # SINGLE(r, i): |A&B| = i, C misses A&B, C covers A\B, one vertex of B\A,
    # and i - 1 fresh vertices
    ab = a & b
    return (_popcount_nb(ab) == i and (c & ab) == zero and ((a & ~b) & ~c) == zero
            and _popcount_nb(c & b & ~a) == 1 and _popcount_nb(c & ~(a | b)) == i - 1)


_ordered_match_nb = _maybe_njit(_ordered_match_loop)


def _triple_match_loop(x, y, z, kind, r, i):
    t = (x, y, z)
    for p in range(6):
        a = t[_ROLES_NB[p, 0]]
        b = t[_ROLES_NB[p, 1]]
        c = t[_ROLES_NB[p, 2]]
        if kind == DELTA:
            for j in range(1, (r + 1) // 2 + 1):
                if _ordered_match_nb(a, b, c, SINGLE, j):
                    return True
        elif _ordered_match_nb(a, b, c, kind, i):
            return True
    return False


_ROLES_NB = _ROLES
_triple_match_nb = _maybe_njit(_triple_match_loop)


# --- numpy versions of the predicates (vectorised over arrays of triples) ---

def _popcount_np(x):
    return np.bitwise_count(x).astype(np.int64)


def _ordered_match_np(a, b, c, kind, i):
    if kind == C_FAMILY:
        return ((a ^ b) & ~c) == 0
    if kind == T_FAMILY:
        return ((a & ~(b | c)) == 0) & ((b & c & ~a) != 0)
    if kind == WEAK:
        d = a ^ b
        return 2 * _popcount_np(c & d) > _popcount_np(d)
    ab = a & b
    return ((_popcount_np(ab) == i) & ((c & ab) == 0) & (((a & ~b) & ~c) == 0)
            & (_popcount_np(c & b & ~a) == 1) & (_popcount_np(c & ~(a | b)) == i - 1))


def triple_match_np(x, y, z, kind, r, i):
    """Vectorised: does each triple ``(x[k], y[k], z[k])`` match in some role order."""
    t = (x, y, z)
    out = np.zeros(np.broadcast(x, y, z).shape, dtype=bool)
    for p in _ROLES:
        a, b, c = t[p[0]], t[p[1]], t[p[2]]
        if kind == DELTA:
            for j in range(1, (r + 1) // 2 + 1):
                out |= _ordered_match_np(a, b, c, SINGLE, j)
        else:
            out |= _ordered_match_np(a, b, c, kind, i)
    return out


# --- triple scan -------------------------------------------------------------

def _scan_triples_loop(masks, kind, r, i):
    m = masks.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for a in range(m):
        for b in range(a + 1, m):
            for c in range(b + 1, m):
                if _triple_match_nb(masks[a], masks[b], masks[c], kind, r, i):
                    out[0] = a
                    out[1] = b
                    out[2] = c
                    return out
    return out


_scan_triples_nb = _maybe_njit(_scan_triples_loop)


def scan_triples_numpy(masks, kind, r, i, chunk=1 << 18):
    masks = np.asarray(masks, dtype=np.uint64)
    m = len(masks)
    if m < 3:
        return np.full(3, -1, dtype=np.int64)
    # lexicographic order of (a, b, c) so the first witness matches the loop version
    for a in range(m - 2):
        bc = np.array(list(itertools.combinations(range(a + 1, m), 2)), dtype=np.int64)
        for s in range(0, len(bc), chunk):
            blk = bc[s:s + chunk]
            hit = triple_match_np(masks[a], masks[blk[:, 0]], masks[blk[:, 1]], kind, r, i)
            if hit.any():
                k = int(np.argmax(hit))
                return np.array([a, blk[k, 0], blk[k, 1]], dtype=np.int64)
    return np.full(3, -1, dtype=np.int64)


def scan_triples_numba(masks, kind, r, i):
    return _scan_triples_nb(np.asarray(masks, dtype=np.uint64), kind, r, i)


# --- conflict table for the extremal search ---------------------------------

def _conflict_table_loop(masks, kind, r, i):
    m = masks.shape[0]
    table = np.zeros((m, m), dtype=np.uint64)
    for a in range(m):
        for b in range(a + 1, m):
            acc = np.uint64(0)
            for c in range(m):
                if c == a or c == b:
                    continue
                if _triple_match_nb(masks[a], masks[b], masks[c], kind, r, i):
                    acc |= np.uint64(1) << np.uint64(c)
            table[a, b] = acc
            table[b, a] = acc
    return table


_conflict_table_nb = _maybe_njit(_conflict_table_loop)


def conflict_table_numpy(masks, kind, r, i):
    masks = np.asarray(masks, dtype=np.uint64)
    m = len(masks)
    a, b, c = np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")
    hit = triple_match_np(masks[a], masks[b], masks[c], kind, r, i)
    hit &= (a != b) & (a != c) & (b != c)
    weights = np.uint64(1) << np.arange(m, dtype=np.uint64)
    return np.bitwise_or.reduce(np.where(hit, weights[None, None, :], np.uint64(0)), axis=2) \
        if m else np.zeros((0, 0), dtype=np.uint64)


def conflict_table_numba(masks, kind, r, i):
    return _conflict_table_nb(np.asarray(masks, dtype=np.uint64), kind, r, i)


# --- exhaustive extremal DFS -------------------------------------------------

def _extremal_dfs_loop(conflict, m, start_best):
    """Enumerate all maximum-size subsets of ``range(m)`` with no conflicting triple.

    Include/exclude branching over edges in index order. ``blocked`` holds
    every edge that would complete a forbidden triple with two chosen
    edges. A branch is cut when even taking every remaining unblocked edge
    cannot reach the best size found so far.
    """
    one = np.uint64(1)
    full = np.uint64(0xFFFFFFFFFFFFFFFF) if m == 64 else (one << np.uint64(m)) - one
    # suffix[k]: mask of edges with index >= k
    suffix = np.zeros(m + 1, dtype=np.uint64)
    for k in range(m):
        suffix[k] = full & ~((one << np.uint64(k)) - one)
    st_k = np.zeros(m + 2, dtype=np.int64)
    st_chosen = np.zeros(m + 2, dtype=np.uint64)
    st_blocked = np.zeros(m + 2, dtype=np.uint64)
    st_stage = np.zeros(m + 2, dtype=np.int64)
    best = start_best
    wit = np.zeros(16, dtype=np.uint64)
    nwit = 0
    nodes = 0
    max_seen = 0
    top = 0
    st_k[0] = 0
    st_chosen[0] = 0
    st_blocked[0] = 0
    st_stage[0] = 0
    while top >= 0:
        k = st_k[top]
        chosen = st_chosen[top]
        blocked = st_blocked[top]
        stage = st_stage[top]
        if stage == 0:
            nodes += 1
            cnt = _popcount_nb(chosen)
            if cnt > max_seen:
                max_seen = cnt
            avail = suffix[k] & ~blocked
            if cnt + _popcount_nb(avail) < best:
                top -= 1
                continue
            if k == m:
                if cnt > best:
                    best = cnt
                    nwit = 0
                if nwit == wit.shape[0]:
                    grown = np.zeros(2 * nwit, dtype=np.uint64)
                    grown[:nwit] = wit
                    wit = grown
                wit[nwit] = chosen
                nwit += 1
                top -= 1
                continue
            st_stage[top] = 1
            bit = one << np.uint64(k)
            if (blocked & bit) == np.uint64(0):
                nb = blocked
                rest = chosen
                while rest != np.uint64(0):
                    low = rest & (~rest + one)
                    a = _popcount_nb(low - one)
                    nb |= conflict[k, a]
                    rest ^= low
                top += 1
                st_k[top] = k + 1
                st_chosen[top] = chosen | bit
                st_blocked[top] = nb
                st_stage[top] = 0
            continue
        # stage 1: include branch done, reuse the frame for the exclude branch
        st_k[top] = k + 1
        st_stage[top] = 0
    return best, wit[:nwit].copy(), nodes, max_seen


_extremal_dfs_nb = _maybe_njit(_extremal_dfs_loop)


def extremal_dfs_numba(conflict, m, start_best=0):
    best, wit, nodes, max_seen = _extremal_dfs_nb(np.asarray(conflict, dtype=np.uint64), m, start_best)
    return int(best), [int(w) for w in wit], int(nodes), int(max_seen)


def extremal_dfs_python(conflict, m, start_best=0):
    conf = [[int(conflict[a, b]) for b in range(m)] for a in range(m)]
    full = (1 << m) - 1
    suffix = [full & ~((1 << k) - 1) for k in range(m + 1)]
    best = start_best
    wit: list[int] = []
    nodes = 0
    max_seen = 0
    # explicit stack of (k, chosen, blocked, count, chosen_list)
    stack = [(0, 0, 0, 0, ())]
    while stack:
        k, chosen, blocked, cnt, members = stack.pop()
        nodes += 1
        max_seen = max(max_seen, cnt)
        if cnt + (suffix[k] & ~blocked).bit_count() < best:
            continue
        if k == m:
            if cnt > best:
                best, wit = cnt, []
            wit.append(chosen)
            continue
        # push exclude first so include is explored first, as in the numba path
        stack.append((k + 1, chosen, blocked, cnt, members))
        if not (blocked >> k) & 1:
            nb = blocked
            row = conf[k]
            for a in members:
                nb |= row[a]
            stack.append((k + 1, chosen | (1 << k), nb, cnt + 1, members + (k,)))
    return best, wit, nodes, max_seen


# --- Lagrangian polynomial ---------------------------------------------------

def _eval_poly_loop(edges, x):
    # Neumaier compensated sum of edge monomials
    s = 0.0
    comp = 0.0
    for k in range(edges.shape[0]):
        t = 1.0
        for j in range(edges.shape[1]):
            t *= x[edges[k, j]]
        u = s + t
        if abs(s) >= abs(t):
            comp += (s - u) + t
        else:
            comp += (t - u) + s
        s = u
    return s + comp


def _grad_poly_loop(edges, x):
    n = x.shape[0]
    g = np.zeros(n)
    r = edges.shape[1]
    for k in range(edges.shape[0]):
        for j in range(r):
            t = 1.0
            for l in range(r):
                if l != j:
                    t *= x[edges[k, l]]
            g[edges[k, j]] += t
    return g


def _hess_poly_loop(edges, x):
    n = x.shape[0]
    h = np.zeros((n, n))
    r = edges.shape[1]
    for k in range(edges.shape[0]):
        for a in range(r):
            for b in range(r):
                if a == b:
                    continue
                t = 1.0
                for l in range(r):
                    if l != a and l != b:
                        t *= x[edges[k, l]]
                h[edges[k, a], edges[k, b]] += t
    return h


_eval_poly_nb = _maybe_njit(_eval_poly_loop)
_grad_poly_nb = _maybe_njit(_grad_poly_loop)
_hess_poly_nb = _maybe_njit(_hess_poly_loop)


def eval_poly_numpy(edges, x):
    if len(edges) == 0:
        return 0.0
    return math.fsum(np.prod(x[edges], axis=1))


def grad_poly_numpy(edges, x):
    n = len(x)
    g = np.zeros(n)
    if len(edges) == 0:
        return g
    vals = x[edges]
    r = edges.shape[1]
    for j in range(r):
        others = np.prod(np.delete(vals, j, axis=1), axis=1) if r > 1 else np.ones(len(edges))
        np.add.at(g, edges[:, j], others)
    return g


def hess_poly_numpy(edges, x):
    n = len(x)
    h = np.zeros((n, n))
    if len(edges) == 0:
        return h
    vals = x[edges]
    r = edges.shape[1]
    for a in range(r):
        for b in range(r):
            if a == b:
                continue
            keep = [l for l in range(r) if l not in (a, b)]
            t = np.prod(vals[:, keep], axis=1) if keep else np.ones(len(edges))
            np.add.at(h, (edges[:, a], edges[:, b]), t)
    return h


def eval_poly_numba(edges, x):
    return float(_eval_poly_nb(np.ascontiguousarray(edges, dtype=np.int64), np.asarray(x, dtype=np.float64)))


def grad_poly_numba(edges, x):
    return _grad_poly_nb(np.ascontiguousarray(edges, dtype=np.int64), np.asarray(x, dtype=np.float64))


def hess_poly_numba(edges, x):
    return _hess_poly_nb(np.ascontiguousarray(edges, dtype=np.int64), np.asarray(x, dtype=np.float64))


# --- isomorphism-class enumeration ------------------------------------------

def _orbit_reps_loop(perm_maps, m):
    total = 1 << m
    seen = np.zeros(total, dtype=np.bool_)
    reps = np.zeros(1024, dtype=np.int64)
    nrep = 0
    for mask in range(total):
        if seen[mask]:
            continue
        if nrep == reps.shape[0]:
            grown = np.zeros(2 * nrep, dtype=np.int64)
            grown[:nrep] = reps
            reps = grown
        reps[nrep] = mask
        nrep += 1
        for p in range(perm_maps.shape[0]):
            img = 0
            for j in range(m):
                if (mask >> j) & 1:
                    img |= 1 << perm_maps[p, j]
            seen[img] = True
    return reps[:nrep].copy()


_orbit_reps_nb = _maybe_njit(_orbit_reps_loop)


def orbit_reps_numba(perm_maps, m):
    return [int(v) for v in _orbit_reps_nb(np.ascontiguousarray(perm_maps, dtype=np.int64), m)]


def orbit_reps_numpy(perm_maps, m):
    perm_maps = np.asarray(perm_maps, dtype=np.int64)
    seen = np.zeros(1 << m, dtype=bool)
    weights = np.int64(1) << perm_maps  # (P, m)
    reps = []
    for mask in range(1 << m):
        if seen[mask]:
            continue
        reps.append(mask)
        bits = np.array([j for j in range(m) if (mask >> j) & 1], dtype=np.int64)
        imgs = weights[:, bits].sum(axis=1) if len(bits) else np.zeros(len(perm_maps), dtype=np.int64)
        seen[imgs] = True
    return reps


# --- dispatch ----------------------------------------------------------------

if NUMBA_ENABLED:
    scan_triples = scan_triples_numba
    conflict_table = conflict_table_numba
    extremal_dfs = extremal_dfs_numba
    eval_poly = eval_poly_numba
    grad_poly = grad_poly_numba
    hess_poly = hess_poly_numba
    orbit_reps = orbit_reps_numba
else:
    scan_triples = scan_triples_numpy
    conflict_table = conflict_table_numpy
    extremal_dfs = extremal_dfs_python
    eval_poly = eval_poly_numpy
    grad_poly = grad_poly_numpy
    hess_poly = hess_poly_numpy
    orbit_reps = orbit_reps_numpy
