import random
from fractions import Fraction

import pytest

from hyperturan.extremal import gen_turan
from hyperturan.families import gen_T
from hyperturan.hypercore import (HypergraphError, RGraph, blowup, complete_graph, degree_profile,
                                  duplicate_vertex, find_homomorphism, find_r_partition, format_hg, induced,
                                  is_2_covered, is_homomorphism, is_isomorphic, is_partial_steiner, link,
                                  parse_hg, read_hg, remove_vertex, shadow, write_hg)


def test_canonical_form_sorts_and_dedupes():
    H = RGraph(4, 3, [(3, 2, 1), (1, 2, 3), (4, 1, 2)])
    assert H.edges == ((1, 2, 3), (1, 2, 4))
    assert H == RGraph(4, 3, [(1, 2, 4), (1, 2, 3)])
    assert (2, 1, 3) in H


@pytest.mark.parametrize("edges", [[(1, 2)], [(1, 1, 2)], [(1, 2, 5)], [(0, 1, 2)]])
def test_rejects_bad_edges(edges):
    with pytest.raises(HypergraphError):
        RGraph(4, 3, edges)


def test_link_examples(t31, t36):
    assert link(t31, 1).edges == ((2, 3), (4, 5))
    assert len(link(RGraph(4, 3, [(1, 2, 3)]), 4)) == 0
    assert link(t36, 1).edges == ((3, 5), (3, 6), (4, 5), (4, 6))
    with pytest.raises(HypergraphError):
        link(t31, 0)


def test_shadow_examples(t31, t36):
    assert shadow(RGraph(3, 3, [(1, 2, 3)]), 1).edges == ((1, 2), (1, 3), (2, 3))
    assert shadow(t31, 2).edges == tuple((v,) for v in range(1, 6))
    assert len(shadow(t36, 1)) == 12


def test_shadow_composes():
    H = complete_graph(6, 4)
    H = RGraph(6, 4, H.edges[::3])
    assert shadow(shadow(H, 1), 2) == shadow(H, 3)
    assert shadow(shadow(H, 2), 1) == shadow(H, 3)


def test_remove_vertex(t31, t36):
    # T31 is declared on 7 vertices, so two isolated vertices remain
    assert remove_vertex(t31, 5).compact() == RGraph(4, 3, [(1, 2, 3), (2, 3, 4)])
    assert len(remove_vertex(RGraph(3, 3, [(1, 2, 3)]), 2)) == 0
    assert len(remove_vertex(t36, 1)) == 4


def test_blowup_examples():
    edge = RGraph(3, 3, [(1, 2, 3)])
    assert is_isomorphic(blowup(edge, [2, 2, 2]), gen_turan(6, 3)) is not None
    k3 = complete_graph(3, 2)
    assert len(blowup(k3, [2, 2, 2])) == 12
    G = gen_T(3, 1)
    assert blowup(G, [1] * G.n) == G
    with pytest.raises(HypergraphError):
        blowup(G, [1, 1])


def test_duplicate_vertex(t31):
    assert duplicate_vertex(RGraph(2, 2, [(1, 2)]), 1) == RGraph(3, 2, [(1, 2), (2, 3)])
    iso = RGraph(4, 2, [(1, 2)])
    assert duplicate_vertex(iso, 4) == RGraph(5, 2, [(1, 2)])
    assert len(duplicate_vertex(t31, 2)) == len(t31) + t31.degree(2) == 5


def test_covering_and_steiner(fano, t31, k4_minus):
    assert is_2_covered(RGraph(4, 4, [(1, 2, 3, 4)]))
    assert not is_2_covered(t31)
    assert is_2_covered(fano)
    assert is_partial_steiner(fano)
    assert not is_partial_steiner(k4_minus)
    assert is_partial_steiner(RGraph(9, 3, [(4, 5, 6)]))


def test_degree_profile(t31, t36):
    p = degree_profile(t36)
    assert (p.min, p.max, p.avg) == (4, 4, Fraction(4))
    p = degree_profile(RGraph(3, 3, [(1, 2, 3)]))
    assert (p.min, p.max, p.avg) == (1, 1, 1)
    p = degree_profile(t31)
    assert (p.min, p.max) == (0, 2)  # vertices 6, 7 are isolated in the declared vertex set
    p = degree_profile(t31.compact())
    assert (p.min, p.max) == (1, 2) and t31.degree(5) == 1


def test_degree_sum_identity(fano):
    assert sum(fano.degrees()) == fano.r * len(fano)


def test_r_partition(t36):
    P = find_r_partition(t36)
    assert sorted(sorted(p) for p in P.parts) == [[1, 2], [3, 4], [5, 6]]
    assert P.is_transversal(t36)
    assert find_r_partition(complete_graph(4, 3)) is None
    empty = RGraph(5, 3)
    P = find_r_partition(empty)
    assert P is not None and set().union(*P.parts) == set(range(1, 6))


def test_r_partition_by_exhaustive_assignment():
    # oracle: try every map V -> {0..r-1}
    import itertools
    rnd = random.Random(3)
    cand = list(itertools.combinations(range(1, 6), 3))
    for _ in range(40):
        H = RGraph(5, 3, rnd.sample(cand, rnd.randint(0, 6)))
        brute = any(all(len({c[v - 1] for v in e}) == 3 for e in H.edges)
                    for c in itertools.product(range(3), repeat=5))
        assert (find_r_partition(H) is not None) == brute


def test_isomorphism(t31, k4_minus):
    assert is_isomorphic(gen_T(3, 2), t31) is not None
    phi = is_isomorphic(t31, t31)
    assert phi is not None and is_homomorphism(t31, t31, phi)
    assert is_isomorphic(t31, k4_minus) is None


def test_isomorphism_under_random_relabel(fano):
    rnd = random.Random(7)
    for _ in range(10):
        perm = list(range(1, 8))
        rnd.shuffle(perm)
        G = fano.relabel(perm)
        phi = is_isomorphic(fano, G)
        assert phi is not None
        assert fano.relabel(phi) == G
        assert is_isomorphic(G, fano) is not None


def test_homomorphisms(t31, fano):
    B = blowup(fano, [2, 1, 1, 2, 1, 1, 1])
    phi = find_homomorphism(B, fano)
    assert phi is not None and is_homomorphism(B, fano, phi)
    assert find_homomorphism(t31, RGraph(3, 3, [(1, 2, 3)])) is None
    assert find_homomorphism(t31, complete_graph(7, 3), injective=True) is not None
    with pytest.raises(HypergraphError):
        find_homomorphism(t31, complete_graph(3, 2))


def test_homomorphism_composition(fano):
    B = blowup(fano, [2] * 7)
    BB = blowup(B, [1] * 13 + [2])
    f = find_homomorphism(BB, B)
    g = find_homomorphism(B, fano)
    comp = {v: g[f[v]] for v in BB.vertices}
    assert is_homomorphism(BB, fano, comp)


def test_induced_relabels():
    H = RGraph(5, 2, [(1, 3), (3, 5), (2, 4)])
    assert induced(H, [1, 3, 5]) == RGraph(3, 2, [(1, 2), (2, 3)])


def test_hg_round_trip(tmp_path, fano):
    text = "# comment\n3 7\n" + "".join(" ".join(map(str, reversed(e))) + "\n" for e in fano.edges) + "\n2 1 4\n"
    assert parse_hg(text) == fano
    assert parse_hg(format_hg(fano)) == fano
    write_hg(fano, tmp_path / "f.hg")
    assert read_hg(tmp_path / "f.hg") == fano


@pytest.mark.parametrize("text", ["", "3\n1 2 3\n", "3 4\n1 2\n", "3 4\n1 2 x\n", "3 4\n1 2 9\n"])
def test_hg_rejects(text):
    with pytest.raises(HypergraphError):
        parse_hg(text)
