import itertools
import logging
import random
from fractions import Fraction

import pytest

from hyperturan import extremal as ex
from hyperturan.families import PatternKind, TrianglePattern, find_triangle, gen_T, is_free, is_single_T_triple
from hyperturan.hypercore import (RGraph, blowup, complete_graph, find_r_partition, is_2_covered, is_isomorphic,
                                  is_partial_steiner, remove_vertex)
from hyperturan.lagrangian import ScaleGuardError

K = PatternKind


def test_turan_graphs():
    assert len(ex.gen_turan(6, 3)) == 8
    assert len(ex.gen_turan(5, 2)) == 6
    for r in (2, 3, 4):
        assert ex.gen_turan(r, r) == complete_graph(r, r)
    assert [len(p) for p in ex.turan_parts(7, 3)] == [3, 2, 2]


@pytest.mark.parametrize("n", range(3, 8))
def test_triangle_free_graph_extremal(n):
    rep = ex.ex_search(n, 2, TrianglePattern(K.DELTA, 2))
    assert rep.max_edges == n * n // 4 and rep.complete
    assert len(rep.witnesses) == 1 and is_isomorphic(rep.witnesses[0], ex.gen_turan(n, 2)) is not None


def test_small_3graph_searches():
    rep = ex.ex_search(6, 3, TrianglePattern(K.C_FAMILY, 3))
    assert rep.max_edges == 8 and len(rep.witnesses) == 1
    assert is_isomorphic(rep.witnesses[0], ex.gen_turan(6, 3)) is not None
    rep = ex.ex_search(6, 3, TrianglePattern(K.T_FAMILY, 3))
    assert rep.max_edges == 8 <= Fraction(6 ** 3, 27) and rep.max_visited == 8


def test_search_matches_brute_force():
    # oracle: scan every edge subset of K_5^3 directly
    cand = list(itertools.combinations(range(1, 6), 3))
    for kind in (K.DELTA, K.C_FAMILY, K.WEAK):
        p = TrianglePattern(kind, 3)
        best = 0
        for mask in range(1 << len(cand)):
            sub = [cand[j] for j in range(len(cand)) if mask >> j & 1]
            if len(sub) > best and find_triangle(RGraph(5, 3, sub), p) is None:
                best = len(sub)
        assert ex.ex_search(5, 3, p).max_edges == best


def test_search_guard_and_greedy():
    p = TrianglePattern(K.T_FAMILY, 3)
    with pytest.raises(ScaleGuardError):
        ex.ex_search(8, 3, p)
    rep = ex.ex_search(8, 3, p, incomplete=True, trials=100, seed=1)
    assert not rep.complete and rep.max_edges <= Fraction(8 ** 3, 27)
    assert all(is_free(w, p) for w in rep.witnesses)
    again = ex.ex_search(8, 3, p, incomplete=True, trials=100, seed=1)
    assert again.max_edges == rep.max_edges and again.nodes_explored == rep.nodes_explored


def test_edge_bound_examples():
    v = ex.edge_bound_check(ex.gen_turan(6, 3))
    assert v.applicable and v.ok and v.equality and v.equality_structure_ok
    v = ex.edge_bound_check(ex.gen_turan(7, 3))
    assert v.ok and not v.equality and v.edges == 12 and v.bound == Fraction(343, 27)
    for r in (2, 3, 4):
        v = ex.edge_bound_check(complete_graph(r, r))
        assert v.equality and v.ok
    assert not ex.edge_bound_check(complete_graph(4, 3)).applicable


def test_symmetrize_examples(t31):
    s = ex.symmetrize_decompose(ex.gen_turan(6, 3))
    assert s.pattern_graph == complete_graph(3, 3) and s.sizes == (2, 2, 2) and s.is_symmetrized
    s = ex.symmetrize_decompose(t31.compact())
    assert s.sizes == (1,) * 5 and s.pattern_graph == t31.compact() and not s.is_symmetrized


def test_symmetrize_round_trip(fano):
    rnd = random.Random(11)
    for _ in range(5):
        sizes = [rnd.randint(1, 3) for _ in range(7)]
        s = ex.symmetrize_decompose(blowup(fano, sizes))
        assert s.sizes == tuple(sizes) and s.pattern_graph == fano
        assert blowup(s.pattern_graph, s.sizes) == blowup(fano, sizes)


def test_degree_stability_examples():
    for r in (2, 3, 4):
        for n in range(2 * r, 3 * r + 1):
            v = ex.degree_stability_check(ex.gen_turan(n, r), eps=0.1)
            assert v.free and v.degree_ok and v.partite and v.status == ex.HOLDS
    assert ex.degree_stability_check(gen_T(3, 1)).status == ex.VACUOUS


def test_degree_stability_sweep_n6(caplog):
    # the guarantee is asymptotic; at n = 6 we only record what happens
    statuses = {}
    with caplog.at_level(logging.WARNING):
        for G in ex.enumerate_graphs(6, 3):
            st = ex.degree_stability_check(G, eps=0.05).status
            statuses[st] = statuses.get(st, 0) + 1
    assert sum(statuses.values()) == 2136
    assert statuses.get(ex.HOLDS, 0) >= 1
    assert statuses.get(ex.COUNTEREXAMPLE, 0) == len([r for r in caplog.records if "fails" in r.message])


def test_vertex_extendability():
    for r in (2, 3, 4):
        T = ex.gen_turan(3 * r, r)
        for v in T.vertices:
            assert ex.vertex_extendability_check(T, v).status == ex.HOLDS
    for r, s in ((3, 2), (3, 3), (4, 2)):
        for build in (ex.split_link_instance, ex.crossing_link_instance):
            H, v = build(r, s)
            res = ex.vertex_extendability_check(H, v)
            assert res.status == ex.NOT_APPLICABLE and res.degree_ok and res.removed_partite
            assert is_single_T_triple(*res.witness, 1)
            assert find_r_partition(H) is None and find_r_partition(remove_vertex(H, v)) is not None
    assert ex.vertex_extendability_check(ex.gen_turan(6, 3), 1, eps=0.0).status == ex.HOLDS


def test_vertex_extendability_small_counterexample(caplog):
    # K_4^3 minus a vertex is one edge, K_4^3 itself has no index-1 triangle
    # (too few vertices) and high degree, yet it is not 3-partite
    with caplog.at_level(logging.WARNING):
        res = ex.vertex_extendability_check(complete_graph(4, 3), 1)
    assert res.status == ex.COUNTEREXAMPLE and not res.implication_holds
    assert "vertex extension fails" in caplog.text


def test_pattern_size_bound_logged():
    for sizes in ([2, 2, 2], [3, 3, 3]):
        rep = ex.pattern_size_bound_check(blowup(complete_graph(3, 3), sizes), eps=1e-2)
        assert rep["applicable"] and rep["m"] == 3 and rep["ok"]


def test_steiner_systems(fano):
    assert ex.is_sts(fano) and ex.is_sts(ex.gen_affine_plane())
    assert not ex.is_sts(complete_graph(4, 3))
    assert ex.sts_search(5) == [] and ex.sts_search(8) == []
    assert len(ex.sts_search(7)) == 30
    assert len(ex.dedupe_isomorphic(ex.sts_search(7))) == 1
    for S in (fano, ex.gen_affine_plane()):
        assert is_partial_steiner(S) and is_2_covered(S)
    assert is_isomorphic(ex.sts_search(9, limit=1)[0], ex.gen_affine_plane()) is not None


def test_enumeration_counts():
    # numbers of 3-graphs on n unlabelled vertices
    assert [len(ex.enumerate_graphs(n, 3)) for n in range(3, 7)] == [2, 5, 34, 2136]
    assert [len(ex.enumerate_graphs(n, 2)) for n in range(2, 7)] == [2, 4, 11, 34, 156]
    with pytest.raises(ScaleGuardError):
        ex.enumerate_graphs(8, 3)


def test_two_covered_corpus_matches_brute_force():
    from hyperturan.verify import two_covered_tfree_brute
    for n in range(3, 7):
        a, b = two_covered_tfree_brute(n, 3), ex.two_covered_T_free_3graphs(n)
        assert len(a) == len(b)
    assert [len(ex.two_covered_T_free_3graphs(n)) for n in range(3, 8)] == [1, 0, 0, 0, 1]


def test_copies(fano):
    T = ex.gen_turan(7, 3)
    assert ex.count_copies(T, complete_graph(3, 3)) == len(T)
    assert ex.count_copies(fano, fano) == 1
    assert ex.count_copies(blowup(fano, [2] * 7), fano) == 128
    aux = ex.aux_kgraph(fano, fano)
    assert aux.r == 7 and aux.edges == ((1, 2, 3, 4, 5, 6, 7),)
    assert len(ex.aux_kgraph(ex.gen_turan(6, 3), fano.compact())) == 0
    with pytest.raises(ScaleGuardError):
        ex.count_copies(complete_graph(14, 3), complete_graph(13, 3))


def test_aux_commutes_with_blowup(fano):
    for sizes in ([2, 1, 1, 1, 1, 1, 1], [1, 2, 1, 2, 1, 1, 1]):
        lhs = ex.aux_kgraph(blowup(fano, sizes), fano)
        rhs = blowup(ex.aux_kgraph(fano, fano), sizes)
        assert is_isomorphic(lhs, rhs) is not None


def test_l_intersect(fano, k4_minus):
    assert ex.l_intersect_check(fano, {1})
    assert not ex.l_intersect_check(k4_minus, {1})
    assert ex.l_intersect_check(complete_graph(3, 3), set())


def test_survey():
    rep = ex.l_intersect_lagrangian_survey(3, {1}, 7)
    assert rep.certified and all(abs(v - 1 / 27) <= 1e-9 for v in rep.best.values())
    assert any(is_isomorphic(w, ex.gen_fano()) is not None for w in rep.witnesses[7])
    assert ex.l_intersect_lagrangian_survey(3, {0}, 6).best[6] == pytest.approx(1 / 27, abs=1e-9)
    rep = ex.l_intersect_lagrangian_survey(2, {0}, 6)
    assert all(v == pytest.approx(0.25, abs=1e-9) for v in rep.best.values())
    with pytest.raises(ScaleGuardError):
        ex.l_intersect_lagrangian_survey(3, {1}, 9)
