"""The acceptance battery: one function per criterion, grouped into suites.

``quick`` covers uniformities 2 and 3; ``paper`` adds r = 4 (and single
edges up to r = 5) where the desk-scale guards allow it.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import extremal as ex
from .entropy import alpha_superadditivity, alphas, build_distribution, entropy, entropy_gap, marginal
from .families import PatternKind, TrianglePattern, is_free, is_single_T_triple, is_T_free_via_hom
from .hypercore import RGraph, complete_graph, find_r_partition, is_2_covered, is_isomorphic, remove_vertex
from .lagrangian import PASS, MaximizeConfig, check_opt_structure, eval_P, grad_P, maximize, superadditive_product_bound

SUITES = ("quick", "paper")


@dataclass
class CriterionResult:
    cid: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    hard: bool = True

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.cid:>2}: {self.title} ({self.detail})"


def _timed(cid: int, title: str, fn: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    return CriterionResult(cid, title, ok, detail, time.perf_counter() - t0)


def _uniformities(suite: str) -> tuple[int, ...]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    return (2, 3) if suite == "quick" else (2, 3, 4)


# --- corpora ------------------------------------------------------------------

def two_covered_tfree_brute(n: int, r: int) -> list[RGraph]:
    """2-covered 𝒯_r-free graphs on ``n`` vertices by filtering every isomorphism class."""
    tf = TrianglePattern(PatternKind.T_FAMILY, r)
    return [G for G in ex.enumerate_graphs(n, r) if len(G) and is_2_covered(G) and is_free(G, tf)]


def lagrangian_corpus(suite: str = "paper") -> list[tuple[str, RGraph]]:
    """Single edges plus every 2-covered 𝒯_3-free 3-graph on at most 7 vertices."""
    top = 3 if suite == "quick" else 5
    out = [(f"edge r={r}", complete_graph(r, r)) for r in range(2, top + 1)]
    for n in range(3, 8):
        for k, G in enumerate(ex.two_covered_T_free_3graphs(n)):
            out.append((f"3-graph n={n} #{k}", G))
    return out


# --- criteria -----------------------------------------------------------------

def c1_triangle_free_graphs(ns=range(3, 8)) -> CriterionResult:
    def run():
        bad = []
        for n in ns:
            rep = ex.ex_search(n, 2, TrianglePattern(PatternKind.DELTA, 2))
            uniq = len(rep.witnesses) == 1 and is_isomorphic(rep.witnesses[0], ex.gen_turan(n, 2)) is not None
            if rep.max_edges != n * n // 4 or not uniq:
                bad.append(n)
        return not bad, f"n={list(ns)[0]}..{list(ns)[-1]}, mismatches={bad}"
    res = _timed(1, "ex(n, triangle) = floor(n^2/4), unique witness", run)
    if res.seconds >= 60:
        res.passed, res.detail = False, res.detail + f", {res.seconds:.1f}s over budget"
    return res


def c2_cfamily() -> CriterionResult:
    def run():
        rep = ex.ex_search(6, 3, TrianglePattern(PatternKind.C_FAMILY, 3))
        ws = rep.witnesses
        ok = rep.max_edges == 8 and len(ws) == 1 and is_isomorphic(ws[0], ex.gen_turan(6, 3)) is not None
        return ok, f"max={rep.max_edges}, classes={len(ws)}, nodes={rep.nodes_explored}"
    res = _timed(2, "ex(6, C-family) = 8 with witness T3(6)", run)
    if res.seconds >= 600:
        res.passed = False
    return res


def c3_edge_bound() -> CriterionResult:
    def run():
        rep = ex.ex_search(6, 3, TrianglePattern(PatternKind.T_FAMILY, 3))
        ws = rep.witnesses
        ok = (rep.max_visited <= 8 and rep.max_edges == 8
              and all(is_isomorphic(w, ex.gen_turan(6, 3)) is not None for w in ws))
        verdicts = [ex.edge_bound_check(w) for w in ws]
        ok &= all(v.applicable and v.ok and v.equality for v in verdicts)
        return ok, f"largest visited={rep.max_visited}, equality classes={len(ws)}"
    return _timed(3, "T-free 3-graphs on 6 vertices have <= 8 edges, equality only T3(6)", run)


def _optimum_cache():
    cache = {}

    def get(G: RGraph, restarts: int):
        key = (G, restarts)
        if key not in cache:
            cache[key] = maximize(G, MaximizeConfig(mode="exact", restarts=restarts, seed=0))
        return cache[key]
    return get


_OPT = _optimum_cache()


def c4_lagrangian(suite: str = "paper") -> CriterionResult:
    def run():
        corpus = lagrangian_corpus(suite)
        # independent enumeration route for n <= 6
        brute = [G for n in range(3, 7) for G in two_covered_tfree_brute(n, 3)]
        sts = [G for n in range(3, 7) for G in ex.two_covered_T_free_3graphs(n)]
        routes_agree = len(brute) == len(sts) and all(
            any(is_isomorphic(a, b) is not None for b in sts) for a in brute)
        worst, bad = 0.0, []
        for name, G in corpus:
            res = _OPT(G, 8)
            err = abs(res.value - 1.0 / G.r ** G.r)
            worst = max(worst, err)
            if not res.certified or err > 1e-9:
                bad.append(name)
        return routes_agree and not bad, f"{len(corpus)} instances, max error={worst:.2e}, failures={bad}"
    return _timed(4, "certified Lagrangian = 1/r^r on 2-covered T-free corpus", run)


def c5_structure(suite: str = "paper", restarts: int = 50) -> CriterionResult:
    def run():
        bad, count = [], 0
        for name, G in lagrangian_corpus(suite):
            res = _OPT(G, restarts)
            count += len(res.maximizers)
            if check_opt_structure(G, res, tol=1e-7).verdict != PASS:
                bad.append(name)
        return not bad, f"{count} maximizers over {restarts} restarts + enumeration, failures={bad}"
    return _timed(5, "every maximizer is uniform on one edge", run)


def _random_instance(rng: np.random.Generator, rs) -> tuple[RGraph, np.ndarray]:
    r = int(rng.choice(rs))
    n = int(rng.integers(r, r + 5))
    cand = list(itertools.combinations(range(1, n + 1), r))
    k = int(rng.integers(1, min(len(cand), 12) + 1))
    picks = rng.choice(len(cand), size=k, replace=False)
    return RGraph(n, r, [cand[i] for i in picks]), rng.dirichlet(np.ones(n))


def c6_entropy(suite: str = "paper", instances: int = 100, seed: int = 6) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        rs = _uniformities(suite)
        gap_worst = 0.0
        for _ in range(instances):
            H, x = _random_instance(rng, rs)
            D = build_distribution(H, x)
            for j in range(1, H.r + 1):
                gap_worst = max(gap_worst, entropy_gap(D, j).residual)
        opt_worst = 0.0
        for _, G in lagrangian_corpus(suite):
            res = _OPT(G, 8)
            D = build_distribution(G, res.maximizer)
            diff = entropy(D.atoms) - G.r * entropy(marginal(D, 1))
            opt_worst = max(opt_worst, abs(diff - math.log2(D.beta)))
        ok = gap_worst <= 1e-9 and opt_worst <= 1e-8
        return ok, f"gap residual={gap_worst:.2e} over {instances} instances, optimum residual={opt_worst:.2e}"
    return _timed(6, "entropy gap identity and entropy/Lagrangian identity", run)


def c7_alpha(suite: str = "paper") -> CriterionResult:
    def run():
        worst, superadd = 0.0, True
        for _, G in lagrangian_corpus(suite):
            res = _OPT(G, 8)
            al = alphas(build_distribution(G, res.maximizer))
            worst = max(worst, max(abs(a - (i + 1) / G.r) for i, a in enumerate(al)))
            superadd &= alpha_superadditivity(al, 1e-9)
        return worst <= 1e-6 and superadd, f"max |alpha_i - i/r|={worst:.2e}, superadditive={superadd}"
    return _timed(7, "alpha_i = i/r at optima", run)


def c8_product_sweep(suite: str = "paper", step: Fraction = Fraction(1, 20)) -> CriterionResult:
    def run():
        rs = (3,) if suite == "quick" else (3, 4)
        grid = [k * step for k in range(int(1 / step) + 1)]
        checked, worst = 0, Fraction(-1)
        for r in rs:
            bound = Fraction(math.factorial(r), r ** r)
            for head in itertools.product(grid, repeat=r - 1):
                rep = superadditive_product_bound([*head, Fraction(1)])
                if rep.hypothesis_holds:
                    checked += 1
                    worst = max(worst, rep.product - bound)
            eq = superadditive_product_bound([Fraction(i, r) for i in range(1, r + 1)])
            if not (eq.hypothesis_holds and eq.product == bound):
                return False, f"equality point fails at r={r}"
        ok = worst <= Fraction(1, 10 ** 12)
        return ok, f"{checked} admissible grid points, max excess={float(worst):.3g}, equality exact"
    return _timed(8, "superadditive product bound r!/r^r", run)


def c9_oracle(n_max: int = 6) -> CriterionResult:
    def run():
        total, disagree = 0, []
        for n in range(3, n_max + 1):
            for G in ex.enumerate_graphs(n, 3):
                total += 1
                if bool(is_free(G, TrianglePattern(PatternKind.T_FAMILY, 3))) != is_T_free_via_hom(G):
                    disagree.append(G)
        return not disagree, f"{total} isomorphism classes, disagreements={len(disagree)}"
    return _timed(9, "triple scan agrees with homomorphism oracle", run)


def c10_gradient(suite: str = "paper", instances: int = 100, seed: int = 10, h: float = 1e-6) -> CriterionResult:
    def run():
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(instances):
            H, x = _random_instance(rng, _uniformities(suite))
            g = grad_P(H, x)
            eye = np.eye(H.n)
            fd = np.array([(eval_P(H, x + h * eye[k]) - eval_P(H, x - h * eye[k])) / (2 * h) for k in range(H.n)])
            worst = max(worst, float(np.max(np.abs(fd - g))))
        return worst <= 1e-6, f"max component error={worst:.2e}"
    return _timed(10, "gradient matches central differences", run)


def _turan_min_degree(n: int, r: int) -> int:
    sizes = [n // r + (k < n % r) for k in range(r)]
    return min(math.prod(sizes[:k] + sizes[k + 1:]) for k in range(r))


def scenario_corpus(suite: str = "paper", eps: float = 0.05):
    """(label, graph, vertex, expected vertex-check status, expected degree-check status, built).

    Balanced complete r-partite graphs are positive instances whenever their
    closed-form minimum degree clears the threshold; otherwise both checks
    should report their hypotheses unmet.
    """
    rs = _uniformities(suite)
    out = []
    for r in rs:
        for n in range(r, 3 * r + 2):
            T = ex.gen_turan(n, r)
            high = _turan_min_degree(n, r) >= ex.min_degree_threshold(n, r, eps)
            want_v, want_d = (ex.HOLDS, ex.HOLDS) if high else (ex.NOT_APPLICABLE, ex.VACUOUS)
            for v in T.vertices:
                out.append((f"T^{r}({n}) v={v}", T, v, want_v, want_d, False))
        for s in (2, 3):
            if r >= 3 and r * s <= 9:
                H, v = ex.split_link_instance(r, s)
                out.append((f"split r={r} s={s}", H, v, ex.NOT_APPLICABLE, ex.VACUOUS, True))
            if r * s <= 9:
                H, v = ex.crossing_link_instance(r, s)
                out.append((f"crossing r={r} s={s}", H, v, ex.NOT_APPLICABLE, ex.VACUOUS, True))
    return out


def c11_scenarios(suite: str = "paper", eps: float = 0.05) -> CriterionResult:
    def run():
        bad = []
        cache = {}
        corpus = scenario_corpus(suite, eps)
        for label, H, v, want_v, want_d, built in corpus:
            got = ex.vertex_extendability_check(H, v, eps)
            if H not in cache:
                cache[H] = ex.degree_stability_check(H, eps).status
            ok = got.status == want_v and cache[H] == want_d
            if built:
                # the located triple really is the index-1 triangle, and the graph
                # really fails to be r-partite although H - v is
                ok &= (got.witness is not None and is_single_T_triple(*got.witness, 1)
                       and find_r_partition(H) is None and find_r_partition(remove_vertex(H, v)) is not None)
            if not ok:
                bad.append(label)
        return not bad, f"{len(corpus)} instances classified, misclassified={bad}"
    return _timed(11, "stability scenario harnesses classify the constructed corpus", run)


def run_suite(name: str = "quick") -> list[CriterionResult]:
    _uniformities(name)
    results = [c1_triangle_free_graphs(), c2_cfamily(), c3_edge_bound(), c4_lagrangian(name), c5_structure(name),
               c6_entropy(name), c7_alpha(name), c8_product_sweep(name), c9_oracle(), c10_gradient(name),
               c11_scenarios(name)]
    if name == "quick":
        total = sum(r.seconds for r in results)
        results.append(CriterionResult(0, "quick suite wall time under 5 minutes", total < 300,
                                       f"{total:.1f}s", total, hard=False))
    return results
