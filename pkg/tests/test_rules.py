from fractions import Fraction
from itertools import permutations, product as cp

import pytest
from hypothesis import assume, given, strategies as st

from pivotal.exact import dot, sub
from pivotal.polytope import cross_polytope, cube, make_polytope, orient, simplex
from pivotal.rules import (
    GI,
    L1,
    L2,
    LINF,
    MS,
    Arborescence,
    InvalidArborescence,
    NotEdgeGeneric,
    SinkHasNoStep,
    SlopeValue,
    TieDetected,
    UnsupportedNormalization,
    arborescence,
    branching_for_objective,
    custom,
    nw_step,
    parse_normalization,
    realize_arborescence,
    shadow_vertex_path,
    to_dot,
)

S4 = simplex(4)
ORI_S4 = orient(S4, (1, 2, 3, 4))
C2 = cube(2)
ORI_C2 = orient(C2, (1, 2))
C3 = cube(3)
ORI_C3 = orient(C3, (1, 2, 4))


def test_nw_step_examples():
    e1, e4 = S4.index((1, 0, 0, 0)), S4.index((0, 0, 0, 1))
    assert nw_step(ORI_S4, GI, (1, 2, 3, 4), e1) == e4
    assert C2.vertices[nw_step(ORI_C2, GI, (2, 1), C2.index((0, 0)))] == (1, 0)
    only = C2.index((1, 0))
    assert nw_step(ORI_C2, GI, (-5, 7), only) == C2.index((1, 1))
    with pytest.raises(SinkHasNoStep):
        nw_step(ORI_C2, GI, (1, 1), ORI_C2.sink)
    with pytest.raises(TieDetected) as info:
        nw_step(ORI_C2, GI, (1, 1), C2.index((0, 0)))
    assert sorted(info.value.tied) == [1, 2]


def test_arborescence_star_on_simplex():
    A = arborescence(ORI_S4, GI, (1, 2, 3, 4))
    e4 = S4.index((0, 0, 0, 1))
    assert all(A[v] == e4 for v in range(4))


def test_cube_arborescence_adds_the_smallest_missing_coordinate():
    A = arborescence(ORI_C3, GI, (3, 2, 1))
    for v, x in enumerate(C3.vertices):
        if v == ORI_C3.sink:
            continue
        k = min(i for i in range(3) if x[i] == 0)
        target = tuple(1 if i == k else x[i] for i in range(3))
        assert C3.vertices[A[v]] == target


def test_simplex_ms_gives_a_noncrossing_arborescence():
    found = set()
    for w in cp(range(-3, 4), repeat=4):
        try:
            found.add(arborescence(ORI_S4, MS, w).parent)
        except TieDetected:
            continue
    assert len(found) == 5


def test_branching_for_objective_examples():
    X = cross_polytope(3)
    br = branching_for_objective(X, GI, (1, 2, 4))
    e3, me3, e2 = X.index((0, 0, 1)), X.index((0, 0, -1)), X.index((0, 1, 0))
    for v in range(X.n):
        assert br[v] == (e2 if v == me3 else e3)
    br = branching_for_objective(C2, GI, (1, 2))
    idx = C2.index
    assert br[idx((0, 0))] == idx((0, 1))
    assert br[idx((1, 0))] == idx((1, 1))
    assert br[idx((0, 1))] == idx((1, 1))
    assert br[idx((1, 1))] == idx((1, 1))
    with pytest.raises(UnsupportedNormalization):
        branching_for_objective(C2, MS, (1, 2))


def test_shadow_paths():
    assert shadow_vertex_path(ORI_S4, (0, 0, 1, 0), ORI_S4.sink) == [ORI_S4.sink]
    e3, e4 = S4.index((0, 0, 1, 0)), S4.index((0, 0, 0, 1))
    assert shadow_vertex_path(ORI_S4, (0, 0, 1, 0), e3) == [e3, e4]
    path = shadow_vertex_path(ORI_C2, (1, -3), C2.index((1, 0)))
    assert path == [C2.index((1, 0)), C2.index((1, 1))]
    # from the source, the two monotone paths differ in their first step; the slope picks one
    path = shadow_vertex_path(ORI_C2, (1, -3), C2.index((0, 0)))
    steps = {u: dot((1, -3), sub(C2.vertices[u], C2.vertices[0])) / dot((1, 2), sub(C2.vertices[u], C2.vertices[0]))
             for u in ORI_C2.out[0]}
    assert path[1] == max(steps, key=steps.get)


def test_realize_arborescence():
    sq = make_polytope([(0, 0), (3, 1), (1, 2), (5, 4)])
    ori = orient(sq, (1, 2))
    from pivotal.pivot_polytopes import enumerate_all_arborescences
    for A in enumerate_all_arborescences(ori):
        N = realize_arborescence(sq, (1, 2), A)
        assert arborescence(ori, N, (1, 2)) == A
    tri = make_polytope([(0, 0), (2, 1), (3, 3)])
    ori = orient(tri, (1, 1))
    for A in enumerate_all_arborescences(ori):
        assert arborescence(ori, realize_arborescence(tri, (1, 1), A), (1, 1)) == A
    with pytest.raises(NotEdgeGeneric):
        realize_arborescence(C3, (1, 2, 4), arborescence(ORI_C3, GI, (3, 2, 1)))


def test_invalid_arborescences():
    with pytest.raises(InvalidArborescence):
        Arborescence((1, 0, 2), 2)
    with pytest.raises(InvalidArborescence):
        Arborescence((0, 1), 1)


def test_normalizations():
    assert parse_normalization("LInf") == LINF
    with pytest.raises(ValueError):
        parse_normalization("l3")
    assert L1.value((1, -2)) == 3 and LINF.value((1, -2)) == 2
    N = custom({(1, 0): 2}, 1)
    assert N.value((1, 0)) == 2 and N.value((0, 1)) == 1
    with pytest.raises(ValueError):
        custom({(1, 0): 0}, 1)
    assert SlopeValue(Fraction(1), Fraction(2)) < SlopeValue(Fraction(1), Fraction(1))
    assert SlopeValue(Fraction(-1), Fraction(1)) < SlopeValue(Fraction(1), Fraction(9))
    assert SlopeValue(Fraction(2), Fraction(4)) == SlopeValue(Fraction(1), Fraction(1))


def test_dot_output():
    text = to_dot(ORI_C2, arborescence(ORI_C2, GI, (2, 1)))
    assert text.startswith("digraph") and text.count("->") == 3


weights4 = st.tuples(*[st.integers(-9, 9)] * 4)
weights3 = st.tuples(*[st.integers(-9, 9)] * 3)


def _arb(ori, N, w):
    try:
        return arborescence(ori, N, w)
    except TieDetected:
        return None


@given(weights3, st.integers(1, 7))
def test_positive_scaling_invariance(w, lam):
    for N in (GI, L1, L2, LINF, MS):
        A = _arb(ORI_C3, N, w)
        assume(A is not None)
        assert arborescence(ORI_C3, N, tuple(lam * x for x in w)) == A


@given(weights4)
def test_norms_agree_on_simplices(w):
    A = _arb(ORI_S4, GI, w)
    assume(A is not None)
    for N in (L1, L2, LINF):
        assert arborescence(ORI_S4, N, w) == A


@given(weights3, st.permutations([1, 2, 5]))
def test_max_slope_on_cubes_is_rescaled_greatest_improvement(w, c):
    ori = orient(C3, c)
    A = _arb(ori, MS, w)
    assume(A is not None)
    w2 = tuple(Fraction(x) / ci for x, ci in zip(w, c))
    assert arborescence(ori, GI, w2) == A


@given(weights3)
def test_shadow_path_is_increasing(w):
    for start in range(C3.n):
        try:
            path = shadow_vertex_path(ORI_C3, w, start)
        except TieDetected:
            return
        levels = [ORI_C3.level(v) for v in path]
        assert all(a < b for a, b in zip(levels, levels[1:]))
        assert path[-1] == ORI_C3.sink
