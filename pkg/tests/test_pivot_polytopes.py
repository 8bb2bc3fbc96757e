import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from pivotal.battery import is_noncrossing, random_instance
from pivotal.exact import Witness, dot, sub, vsum
from pivotal.paths_sweeps import is_cellular
from pivotal.pivot_polytopes import (
    Incoherent,
    MultiArborescence,
    NotCoherent,
    are_adjacent_vertices,
    brute_force_coherent,
    count_all_arborescences,
    corollary_membership,
    differ_by_rerouting,
    enumerate_all_arborescences,
    enumerate_coherent,
    face_for_weight,
    face_witness,
    is_coherent,
    finest_coherent_coarsening,
    h_product,
    local_summand,
    multiarb_count,
    neighbotope,
    neighbotope_bound,
    phi_point,
    pivot_polytope,
    refines,
    ub_theorem_margin,
)
from pivotal.polytope import cross_polytope, cube, make_polytope, orient, prism, simplex
from pivotal.rules import GI, L1, L2, LINF, MS, Arborescence, UnsupportedNormalization, arborescence

S4 = simplex(4)
ORI_S4 = orient(S4, (1, 2, 3, 4))
S5 = simplex(5)
ORI_S5 = orient(S5, (1, 2, 3, 4, 5))
C2 = cube(2)
ORI_C2 = orient(C2, (1, 2))
C3 = cube(3)
ORI_C3 = orient(C3, (1, 2, 4))


def sigma_arborescence(sigma):
    """Add the missing coordinate of smallest sigma-rank."""
    parent = []
    for x in C3.vertices:
        missing = [i for i in range(3) if x[i] == 0]
        if not missing:
            parent.append(C3.index(x))
            continue
        k = min(missing, key=lambda i: sigma[i])
        parent.append(C3.index(tuple(1 if i == k else x[i] for i in range(3))))
    return Arborescence(tuple(parent), ORI_C3.sink)


def test_phi_point_examples():
    single = make_polytope([(1, 2)], [])
    assert phi_point(single, GI, (0,)) == (0, 0)
    # coordinate 3 is added first, coordinate 1 last
    assert phi_point(C3, GI, sigma_arborescence((2, 1, 0))) == (1, 2, 4)
    assert phi_point(C3, GI, sigma_arborescence((0, 1, 2))) == (4, 2, 1)
    star = Arborescence((3, 3, 3, 3), 3)
    assert phi_point(S4, GI, star) == (-1, -1, -1, 3)


def test_local_summands():
    e3 = S4.index((0, 0, 1, 0))
    assert local_summand(ORI_S4, GI, e3) == {(-0, 0, -1, 1)}
    assert local_summand(ORI_C2, GI, 0) == {(1, 0), (0, 1)}
    top = C2.index((1, 1))
    assert local_summand(ORI_C2, GI, top, undirected=True) == {(-1, 0), (0, -1), (0, 0)}


def test_coherence_examples():
    for sigma in permutations(range(3)):
        assert isinstance(is_coherent(ORI_C3, GI, sigma_arborescence(sigma)), Witness)
    crossing = [A for A in enumerate_all_arborescences(ORI_S5) if not is_noncrossing(ORI_S5, A)]
    assert crossing
    for A in crossing:
        assert isinstance(is_coherent(ORI_S5, MS, A), Incoherent)
    path = make_polytope([(0,), (1,)])
    ori = orient(path, (1,))
    assert isinstance(is_coherent(ori, GI, enumerate_all_arborescences(ori)[0]), Witness)


def test_enumeration_counts():
    assert len(enumerate_coherent(ORI_S4, GI)) == 4
    coh = enumerate_coherent(ORI_C3, GI)
    assert sorted(phi_point(C3, GI, A) for A, _ in coh) == sorted(
        tuple(Fraction(x) for x in p) for p in permutations((1, 2, 4)))
    assert len(enumerate_coherent(ORI_S4, MS)) == 5
    assert len(enumerate_all_arborescences(ORI_S4)) == 6
    assert count_all_arborescences(ORI_C3) == 3 * 2 * 2 * 2 == len(enumerate_all_arborescences(ORI_C3))
    with pytest.raises(UnsupportedNormalization):
        enumerate_coherent(ORI_C3, L2)


def test_neighbotope_counts():
    assert neighbotope(C2, GI).n == 8
    assert neighbotope(cross_polytope(3), GI).n == 24
    with pytest.raises(UnsupportedNormalization):
        neighbotope(C2, MS)


def test_face_for_weight():
    M = face_for_weight(ORI_C2, GI, (2, 1))
    assert M.is_singleton()
    M = face_for_weight(ORI_C2, GI, (1, 1))
    assert M[C2.index((0, 0))] == {C2.index((1, 0)), C2.index((0, 1))}
    M = face_for_weight(ORI_C3, GI, (0, 0, 0))
    assert all(M[v] == frozenset(ORI_C3.out[v]) for v in range(C3.n) if v != ORI_C3.sink)


def test_finest_coherent_coarsening():
    A = sigma_arborescence((2, 0, 1))
    assert finest_coherent_coarsening(ORI_C3, GI, A) == MultiArborescence.of(A)
    crossing = next(A for A in enumerate_all_arborescences(ORI_S5) if not is_noncrossing(ORI_S5, A))
    M = finest_coherent_coarsening(ORI_S5, MS, crossing)
    assert refines(crossing, M) and not M.is_singleton()
    assert isinstance(face_witness(ORI_S5, MS, M), Witness)
    # the tie sets must hold the crossing choices together
    order = sorted(range(5), key=ORI_S5.level)
    i, j = next((i, j) for i in range(5) for j in range(i + 1, 5)
                if crossing[order[i]] != order[i] and crossing[order[j]] != order[j]
                and order.index(crossing[order[i]]) < order.index(crossing[order[j]])
                and j < order.index(crossing[order[i]]))
    assert len(M[order[i]]) > 1 or len(M[order[j]]) > 1


def test_adjacency_and_rerouting():
    A = sigma_arborescence((0, 1, 2))
    B = sigma_arborescence((1, 0, 2))
    assert refines(A, A) and not are_adjacent_vertices(ORI_C3, GI, A, A)
    assert are_adjacent_vertices(ORI_C3, GI, A, B)
    far = sigma_arborescence((2, 1, 0))
    assert not differ_by_rerouting(A, far)
    assert not are_adjacent_vertices(ORI_C3, GI, A, far)
    crossing = next(X for X in enumerate_all_arborescences(ORI_S5) if not is_noncrossing(ORI_S5, X))
    good = enumerate_coherent(ORI_S5, MS)[0][0]
    with pytest.raises(NotCoherent):
        are_adjacent_vertices(ORI_S5, MS, crossing, good)


def test_edges_of_the_cube_permutahedron_are_adjacent_transpositions():
    Pi = pivot_polytope(ORI_C3, GI)
    for i, j in Pi.edges:
        a, b = Pi.points[i], Pi.points[j]
        assert sum(x != y for x, y in zip(a, b)) == 2


def test_counts_and_bounds():
    assert multiarb_count(ORI_C3) == 7 * 3 ** 3 * 1 ** 3
    assert h_product(ORI_C3) == 2 ** 3 * 3
    count, bound = ub_theorem_margin(ORI_C3, GI)
    assert count == 6 and count < bound
    assert neighbotope(C3, GI).n <= neighbotope_bound(C3)
    assert corollary_membership(C2, GI, [(1, 2), (2, -1), (-3, 1)])


def test_minkowski_decomposition_and_chamber_stability():
    rng = random.Random(5)
    for ori, N in ((ORI_C3, GI), (ORI_C3, MS), (ORI_S5, MS), (orient(prism(simplex(3)), (1, 2, 3, 5)), L1)):
        P = ori.polytope
        pairs = enumerate_coherent(ori, N)
        seen = set()
        for A, w in pairs:
            parts = []
            for v in range(P.n):
                if v == ori.sink:
                    continue
                opts = [N.normalized(sub(P.vertices[u], P.vertices[v]), ori.c) for u in ori.out[v]]
                parts.append(max(opts, key=lambda d: dot(w, d)))
            assert phi_point(P, N, A, ori.c) == vsum(parts, P.dim)
            w2 = tuple(x + Fraction(rng.randint(-1, 1), 10 ** 6) for x in w)
            assert arborescence(ori, N, w2) == A
            seen.add(A)
        assert len(seen) == len(pairs)


def test_coherent_ms_faces_are_cellular():
    for w in ((1, 1, 0), (1, 2, 0), (0, 0, 1), (1, 1, 1), (2, -1, 3)):
        M = face_for_weight(ORI_C3, MS, w)
        assert is_cellular(ORI_C3, M)


@settings(max_examples=8)
@given(st.integers(0, 10 ** 6))
def test_sweep_enumeration_matches_lp_oracle(seed):
    ori = random_instance(random.Random(seed))
    for N in (GI, L1, LINF, MS):
        got = sorted(A.parent for A, _ in enumerate_coherent(ori, N, method="sweeps"))
        fan = sorted(A.parent for A, _ in enumerate_coherent(ori, N))
        oracle = sorted(A.parent for A in brute_force_coherent(ori, N))
        assert got == fan == oracle


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_pivot_polytope_vertices_are_coherent_points(seed):
    from oracles import is_vertex_oracle
    ori = random_instance(random.Random(seed), max_directed=8)
    P = ori.polytope
    Pi = pivot_polytope(ori, GI)
    allpts = sorted({phi_point(P, GI, A) for A in enumerate_all_arborescences(ori)})
    hull = sorted(p for p in allpts if is_vertex_oracle(p, allpts))
    assert hull == sorted(Pi.points)
