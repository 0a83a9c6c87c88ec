"""Exhaustive extremal search, symmetrisation, stability scenarios and designs."""

from __future__ import annotations

import itertools
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import _kernels
from .families import PatternKind, TrianglePattern, find_triangle, is_free, triple_matches
from .hypercore import (Edge, HypergraphError, RGraph, blowup, blowup_classes, degree_profile,
                        find_homomorphism, find_r_partition, induced, is_2_covered, is_isomorphic,
                        link, remove_vertex)
from .lagrangian import EXACT_MAX_N, MaximizeConfig, OptResult, ScaleGuardError, maximize

log = logging.getLogger(__name__)

SEARCH_GUARD = 24
COPY_GUARD = 12


# --- constructions -----------------------------------------------------------

def turan_parts(n: int, r: int) -> list[range]:
    sizes = [n // r + (1 if k < n % r else 0) for k in range(r)]
    return blowup_classes(sizes)


def gen_turan(n: int, r: int) -> RGraph:
    """Balanced complete r-partite r-graph on ``1..n`` (consecutive parts)."""
    if n < r:
        raise HypergraphError(f"need n >= r, got n={n}, r={r}")
    return RGraph(n, r, itertools.product(*turan_parts(n, r)))


def gen_fano() -> RGraph:
    """Fano plane from the difference set {0, 1, 3} mod 7."""
    return RGraph(7, 3, [(i % 7 + 1, (i + 1) % 7 + 1, (i + 3) % 7 + 1) for i in range(7)])


def gen_affine_plane() -> RGraph:
    """The 9-point Steiner triple system: lines of the affine plane over GF(3)."""
    pts = {(a, b): 3 * a + b + 1 for a in range(3) for b in range(3)}
    lines = set()
    for p, q in itertools.combinations(pts, 2):
        d = ((q[0] - p[0]) % 3, (q[1] - p[1]) % 3)
        lines.add(tuple(sorted(pts[((p[0] + t * d[0]) % 3, (p[1] + t * d[1]) % 3)] for t in range(3))))
    return RGraph(9, 3, lines)


def is_sts(S: RGraph) -> bool:
    if S.r != 3:
        raise HypergraphError("Steiner triple systems are 3-graphs")
    pairs = [p for e in S.edges for p in itertools.combinations(e, 2)]
    return len(pairs) == len(set(pairs)) == S.n * (S.n - 1) // 2


def sts_search(k: int, limit: int | None = None) -> list[RGraph]:
    """All Steiner triple systems on ``1..k`` by exact cover of the pairs."""
    if k * (k - 1) % 6:
        return []
    out: list[RGraph] = []
    covered = set()
    chosen: list[Edge] = []

    def solve() -> bool:
        free = next(((a, b) for a in range(1, k + 1) for b in range(a + 1, k + 1)
                     if (a, b) not in covered), None)
        if free is None:
            out.append(RGraph(k, 3, chosen))
            return limit is not None and len(out) >= limit
        a, b = free
        for c in range(1, k + 1):
            if c in (a, b):
                continue
            e = tuple(sorted((a, b, c)))
            ps = list(itertools.combinations(e, 2))
            if any(p in covered for p in ps):
                continue
            covered.update(ps)
            chosen.append(e)
            stop = solve()
            chosen.pop()
            covered.difference_update(ps)
            if stop:
                return True
        return False

    solve()
    return out


# --- isomorphism classes ------------------------------------------------------

def dedupe_isomorphic(graphs: Iterable[RGraph]) -> list[RGraph]:
    reps: list[RGraph] = []
    buckets: dict[tuple, list[RGraph]] = {}
    for G in graphs:
        key = (G.n, len(G), tuple(sorted(G.degrees())))
        bucket = buckets.setdefault(key, [])
        if not any(is_isomorphic(G, R) is not None for R in bucket):
            bucket.append(G)
            reps.append(G)
    return reps


def enumerate_graphs(n: int, r: int) -> list[RGraph]:
    """One representative per isomorphism class of r-graphs on ``n`` vertices."""
    cand = list(itertools.combinations(range(1, n + 1), r))
    m = len(cand)
    if m > SEARCH_GUARD:
        raise ScaleGuardError(f"C({n},{r}) = {m} exceeds the enumeration guard {SEARCH_GUARD}")
    index = {e: k for k, e in enumerate(cand)}
    perms = np.array([[index[tuple(sorted(p[v - 1] for v in e))] for e in cand]
                      for p in itertools.permutations(range(1, n + 1))], dtype=np.int64)
    reps = _kernels.orbit_reps(perms, m)
    return [RGraph(n, r, (cand[j] for j in range(m) if mask >> j & 1)) for mask in reps]


# --- exhaustive extremal search ----------------------------------------------

@dataclass
class ExtremalReport:
    n: int
    r: int
    pattern: TrianglePattern
    max_edges: int
    witnesses: list[RGraph]
    nodes_explored: int
    wall_time: float
    complete: bool = True
    labelled_witnesses: int = 0
    max_visited: int = 0


def _mask_to_graph(mask: int, cand: Sequence[Edge], n: int, r: int) -> RGraph:
    return RGraph(n, r, (cand[j] for j in range(len(cand)) if mask >> j & 1))


def ex_search(n: int, r: int, pattern: TrianglePattern, incomplete: bool = False,
              trials: int = 2000, seed: int = 0) -> ExtremalReport:
    """Maximum number of edges in a pattern-free r-graph on ``n`` vertices.

    Complete mode runs the exhaustive DFS and returns every extremal graph
    up to isomorphism. Above the guard, ``incomplete=True`` runs randomised
    greedy constructions and reports a lower bound only.
    """
    if pattern.r != r:
        raise HypergraphError(f"pattern uniformity {pattern.r} != {r}")
    cand = list(itertools.combinations(range(1, n + 1), r))
    m = len(cand)
    t0 = time.perf_counter()
    if m > SEARCH_GUARD and not incomplete:
        raise ScaleGuardError(f"C({n},{r}) = {m} candidate edges exceeds {SEARCH_GUARD}; pass incomplete=True")
    if m <= SEARCH_GUARD:
        masks = RGraph(n, r, cand).edge_masks()
        conflict = _kernels.conflict_table(masks, int(pattern.kind), r, pattern.i)
        best, wit, nodes, max_seen = _kernels.extremal_dfs(conflict, m, 0)
        graphs = [_mask_to_graph(w, cand, n, r) for w in wit]
        return ExtremalReport(n, r, pattern, best, dedupe_isomorphic(graphs), nodes,
                              time.perf_counter() - t0, True, len(graphs), max_seen)
    return _greedy_search(n, r, pattern, cand, trials, seed, t0)


def _greedy_search(n, r, pattern, cand, trials, seed, t0) -> ExtremalReport:
    rng = np.random.default_rng(seed)
    sets = [frozenset(e) for e in cand]
    best, found, nodes = 0, [], 0
    for _ in range(trials):
        chosen: list[int] = []
        for k in rng.permutation(len(cand)):
            nodes += 1
            s = sets[k]
            if any(triple_matches(sets[a], sets[b], s, pattern) for a, b in itertools.combinations(chosen, 2)):
                continue
            chosen.append(int(k))
        if len(chosen) > best:
            best, found = len(chosen), []
        if len(chosen) == best:
            found.append(RGraph(n, r, (cand[k] for k in chosen)))
    reps = dedupe_isomorphic(found[:50])
    return ExtremalReport(n, r, pattern, best, reps, nodes, time.perf_counter() - t0, False, len(found), best)


# --- edge bound ---------------------------------------------------------------

@dataclass(frozen=True)
class EdgeBoundVerdict:
    applicable: bool
    edges: int
    bound: Fraction
    ok: bool
    equality: bool = False
    equality_structure_ok: bool = True


def edge_bound_check(H: RGraph) -> EdgeBoundVerdict:
    """𝒯_r-free graphs have at most ``n^r / r^r`` edges; equality only for balanced T^r(n)."""
    bound = Fraction(H.n ** H.r, H.r ** H.r)
    if not is_free(H, TrianglePattern(PatternKind.T_FAMILY, H.r)):
        return EdgeBoundVerdict(False, len(H), bound, True)
    eq = len(H) == bound
    structure = True
    if eq:
        structure = H.n % H.r == 0 and is_isomorphic(H, gen_turan(H.n, H.r)) is not None
    return EdgeBoundVerdict(True, len(H), bound, len(H) <= bound and structure, eq, structure)


# --- symmetrisation -----------------------------------------------------------

@dataclass(frozen=True)
class SymmetrizationResult:
    pattern_graph: RGraph
    sizes: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    is_symmetrized: bool


def symmetrize_decompose(H: RGraph) -> SymmetrizationResult:
    """Merge twin classes (equal links) and return the reduced pattern graph.

    Equal links already rule out a common edge, and twins of twins are
    twins, so one pass in ascending vertex order gives the maximal
    reduction.
    """
    links = {v: link(H, v).edges if H.r > 1 else () for v in H.vertices}
    assigned: dict[int, int] = {}
    classes: list[list[int]] = []
    for v in H.vertices:
        if v in assigned:
            continue
        cls = [v] + [w for w in H.vertices if w > v and w not in assigned and links[w] == links[v]]
        for w in cls:
            assigned[w] = len(classes)
        classes.append(cls)
    reps = [c[0] for c in classes]
    G = induced(H, reps)
    # induced() relabels reps in increasing order, which matches class order
    return SymmetrizationResult(G, tuple(len(c) for c in classes), tuple(tuple(c) for c in classes),
                                is_2_covered(G))


# --- stability scenarios ------------------------------------------------------

HOLDS, VACUOUS, COUNTEREXAMPLE, NOT_APPLICABLE = "holds", "vacuous", "counterexample", "not-applicable"


def min_degree_threshold(n: int, r: int, eps: float) -> Fraction:
    e = Fraction(eps).limit_denominator(10 ** 9)
    return Fraction(n ** (r - 1), r ** (r - 1)) - e * n ** (r - 1)


@dataclass(frozen=True)
class ScenarioVerdict:
    status: str
    free: bool
    degree_ok: bool
    partite: bool
    min_degree: int
    threshold: Fraction
    removed_partite: bool | None = None
    witness: tuple[Edge, Edge, Edge] | None = None
    reason: str = ""

    @property
    def implication_holds(self) -> bool:
        return self.status != COUNTEREXAMPLE


def degree_stability_check(H: RGraph, eps: float = 0.05) -> ScenarioVerdict:
    """Δ_r-free with near-extremal minimum degree should force r-partite.

    Guaranteed only for large ``n``; a small-``n`` counterexample is logged
    and reported, never raised.
    """
    w = find_triangle(H, TrianglePattern(PatternKind.DELTA, H.r))
    thr = min_degree_threshold(H.n, H.r, eps)
    dmin = degree_profile(H).min
    deg_ok = dmin >= thr
    partite = find_r_partition(H) is not None
    if w is not None or not deg_ok:
        status = VACUOUS
    elif partite:
        status = HOLDS
    else:
        status = COUNTEREXAMPLE
        log.warning("degree stability fails at n=%d r=%d eps=%s: %r", H.n, H.r, eps, H)
    return ScenarioVerdict(status, w is None, deg_ok, partite, dmin, thr, witness=w)


def vertex_extendability_check(H: RGraph, v: int, eps: float = 0.05) -> ScenarioVerdict:
    """If ``H - v`` is r-partite, ``H`` is 𝕋_{r,1}-free and has high minimum degree,
    then ``H`` should be r-partite too."""
    pat = TrianglePattern(PatternKind.SINGLE, H.r, 1)
    w = find_triangle(H, pat)
    thr = min_degree_threshold(H.n, H.r, eps)
    dmin = degree_profile(H).min
    deg_ok = dmin >= thr
    removed = find_r_partition(remove_vertex(H, v)) is not None
    partite = find_r_partition(H) is not None
    reasons = []
    if w is not None:
        reasons.append("contains a copy of the r-uniform triangle with index 1")
    if not deg_ok:
        reasons.append(f"minimum degree {dmin} below {float(thr):.6g}")
    if not removed:
        reasons.append("H - v is not r-partite")
    if reasons:
        return ScenarioVerdict(NOT_APPLICABLE, w is None, deg_ok, partite, dmin, thr, removed, w, "; ".join(reasons))
    if partite:
        return ScenarioVerdict(HOLDS, True, True, True, dmin, thr, True)
    log.warning("vertex extension fails at n=%d r=%d v=%d: %r", H.n, H.r, v, H)
    return ScenarioVerdict(COUNTEREXAMPLE, True, True, False, dmin, thr, True)


def split_link_instance(r: int, s: int) -> tuple[RGraph, int]:
    """T^r(rs) plus a vertex whose link holds one set with two vertices of the first part.

    The extra vertex also gets every transversal of the other parts, so its
    degree stays high. A triangle with index 1 appears through two vertices
    of the first part sharing a link set disjoint from the bad set.
    """
    if r < 3 or s < 2:
        raise HypergraphError("needs r >= 3 and part size >= 2")
    base = gen_turan(r * s, r)
    parts = turan_parts(r * s, r)
    star = r * s + 1
    edges = list(base.edges)
    edges += [(*t, star) for t in itertools.product(*parts[1:])]
    bad = (parts[0][0], parts[0][1], *(parts[k][0] for k in range(1, r - 2)), star)
    edges.append(bad)
    return RGraph(star, r, edges), star


def crossing_link_instance(r: int, s: int) -> tuple[RGraph, int]:
    """T^r(rs) plus a vertex linked to every transversal of parts 1..r-1 and to one
    transversal of parts 2..r."""
    if r < 2 or s < 2:
        raise HypergraphError("needs r >= 2 and part size >= 2")
    base = gen_turan(r * s, r)
    parts = turan_parts(r * s, r)
    star = r * s + 1
    edges = list(base.edges)
    edges += [(*t, star) for t in itertools.product(*parts[:-1])]
    edges.append((*(p[0] for p in parts[1:]), star))
    return RGraph(star, r, edges), star


def pattern_size_bound_check(H: RGraph, eps: float = 1e-2) -> dict:
    """Reduced-pattern size against ``2 r^(r-1) / (r-1)!`` for symmetrized 𝒯_r-free input."""
    sym = symmetrize_decompose(H)
    r = H.r
    limit = 2 * r ** (r - 1) / math.factorial(r - 1)
    applicable = (sym.is_symmetrized and degree_profile(H).min >= min_degree_threshold(H.n, r, eps)
                  and bool(is_free(H, TrianglePattern(PatternKind.T_FAMILY, r))))
    m = sym.pattern_graph.n
    ok = (not applicable) or m <= limit
    if not ok:
        log.warning("pattern size %d exceeds %.3f at n=%d", m, limit, H.n)
    return {"applicable": applicable, "m": m, "limit": limit, "ok": ok}


# --- copies of a fixed graph ----------------------------------------------------

def _check_copy_guard(H: RGraph, S: RGraph) -> None:
    if H.r != S.r:
        raise HypergraphError("uniformity mismatch")
    if S.n > COPY_GUARD:
        raise ScaleGuardError(f"pattern has {S.n} vertices; guard is {COPY_GUARD}")
    if math.comb(H.n, S.n) > 200_000:
        raise ScaleGuardError("too many candidate vertex subsets")


def _spanning_copy_sets(H: RGraph, S: RGraph) -> list[tuple[int, ...]]:
    out = []
    k = S.n
    need = len(S)
    for W in itertools.combinations(H.vertices, k):
        sub = induced(H, W)
        if len(sub) < need:
            continue
        if find_homomorphism(S, sub, injective=True) is not None:
            out.append(W)
    return out


def count_copies(H: RGraph, S: RGraph) -> int:
    """Number of ``v(S)``-subsets of ``V(H)`` spanning a copy of ``S``."""
    _check_copy_guard(H, S)
    return len(_spanning_copy_sets(H, S))


def aux_kgraph(H: RGraph, S: RGraph) -> RGraph:
    """The ``v(S)``-graph on ``V(H)`` whose edges are the vertex sets spanning a copy of ``S``."""
    _check_copy_guard(H, S)
    return RGraph(H.n, S.n, _spanning_copy_sets(H, S))


# --- L-intersecting families ------------------------------------------------------

def l_intersect_check(H: RGraph, L: Iterable[int]) -> bool:
    Ls = set(L)
    sets = [set(e) for e in H.edges]
    return all(len(a & b) in Ls for a, b in itertools.combinations(sets, 2))


@dataclass
class SurveyReport:
    r: int
    L: tuple[int, ...]
    n_max: int
    best: dict[int, float]
    witnesses: dict[int, list[RGraph]]
    families: dict[int, int]
    certified: bool
    target: float = 0.0

    @property
    def attains_target(self) -> dict[int, bool]:
        return {n: abs(v - self.target) <= 1e-9 for n, v in self.best.items()}


def l_intersect_lagrangian_survey(r: int, L: Iterable[int], n_max: int,
                                  cfg: MaximizeConfig | None = None,
                                  max_families: int = 20000) -> SurveyReport:
    """Best Lagrangian over L-intersecting r-graphs on ``n <= n_max`` vertices.

    The Lagrangian never drops when edges are added, so only maximal
    families matter; these are the maximal cliques of the compatibility
    graph on r-sets.
    """
    Ls = tuple(sorted(set(L)))
    if math.comb(n_max, r) > 40:
        raise ScaleGuardError(f"C({n_max},{r}) exceeds the survey guard")
    cfg = cfg or MaximizeConfig(mode="exact" if n_max <= EXACT_MAX_N else "heuristic", restarts=4)
    best, wits, fams = {}, {}, {}
    certified = True
    for n in range(r, n_max + 1):
        cand = list(itertools.combinations(range(1, n + 1), r))
        comp = nx.Graph()
        comp.add_nodes_from(range(len(cand)))
        comp.add_edges_from((a, b) for a, b in itertools.combinations(range(len(cand)), 2)
                            if len(set(cand[a]) & set(cand[b])) in Ls)
        graphs = []
        for clique in nx.find_cliques(comp):
            graphs.append(RGraph(n, r, (cand[k] for k in clique)))
            if len(graphs) > max_families:
                raise ScaleGuardError(f"more than {max_families} maximal families at n={n}")
        graphs = dedupe_isomorphic(graphs)
        fams[n] = len(graphs)
        results: list[tuple[float, RGraph]] = []
        for G in graphs:
            res = maximize(G, cfg)
            certified &= res.certified
            results.append((res.value, G))
        top = max(v for v, _ in results)
        best[n] = top
        wits[n] = [G for v, G in results if v >= top - 1e-9]
    return SurveyReport(r, Ls, n_max, best, wits, fams, certified, 1.0 / r ** r)


# --- enumerations used by the verification battery --------------------------------

def two_covered_T_free_3graphs(n: int) -> list[RGraph]:
    """All 2-covered 𝒯_3-free 3-graphs on ``n`` vertices, up to isomorphism.

    Such graphs are partial Steiner and 2-covered, so they are exactly the
    Steiner triple systems on ``n`` points; each result is re-checked.
    """
    out = dedupe_isomorphic(sts_search(n))
    tfam = TrianglePattern(PatternKind.T_FAMILY, 3)
    return [G for G in out if is_2_covered(G) and is_free(G, tfam)]
