from fractions import Fraction
from math import comb

import pytest
from hypothesis import assume, given, strategies as st

from pivotal.exact import Witness, dot, strict_cone_witness
from pivotal.polytope import (
    DimensionGuard,
    NonGenericObjective,
    NotAVertex,
    compute_edges,
    cross_polytope,
    cube,
    dilate,
    edge_zonotope,
    facets_bruteforce,
    h_vector,
    is_simple,
    make_polytope,
    orient,
    prism,
    product,
    simplex,
    smallest_face,
    translate,
    zonotope,
)

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_edge_counts():
    assert len(compute_edges(SQUARE)) == 4
    assert len(simplex(3).edges) == 3
    assert len(cube(3).edges) == 12
    with pytest.raises(NotAVertex):
        compute_edges([(0, 0), (2, 0), (1, 0)])


@pytest.mark.parametrize("d", [1, 2, 3])
def test_builder_edge_counts(d):
    assert len(compute_edges(simplex(d + 1).vertices)) == comb(d + 1, 2)
    assert len(compute_edges(cube(d).vertices)) == d * 2 ** (d - 1)
    if d >= 2:
        assert len(compute_edges(cross_polytope(d).vertices)) == 2 * d * (d - 1)


def test_orient_examples():
    ori = orient(cube(3), (1, 2, 4))
    assert cube(3).vertices[ori.sink] == (1, 1, 1)
    assert cube(3).vertices[ori.source] == (0, 0, 0)
    S = simplex(4)
    ori = orient(S, (1, 2, 3, 4))
    assert {S.vertices[u] for u in ori.out[S.index((1, 0, 0, 0))]} == {
        (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)}
    # (1,1) separates every square edge; a tie needs c orthogonal to an edge
    assert orient(make_polytope(SQUARE), (1, 1)).sink == 3
    with pytest.raises(NonGenericObjective):
        orient(make_polytope(SQUARE), (1, 0))
    with pytest.raises(ValueError):
        orient(cube(2), (1, 2, 3))


def test_h_vectors():
    assert h_vector(orient(cube(3), (1, 2, 4))) == [1, 3, 3, 1]
    assert h_vector(orient(simplex(4), (1, 2, 3, 4))) == [1, 1, 1, 1]
    assert h_vector(orient(make_polytope(SQUARE), (1, 2))) == [1, 2, 1]


def test_builders():
    hexagon = zonotope([(1, 0), (0, 1), (1, 1)])
    assert hexagon.n == 6 and len(hexagon.edges) == 6
    X = cross_polytope(3)
    assert X.n == 6 and len(X.edges) == 12
    T = prism(simplex(3))
    assert T.n == 6 and len(T.edges) == 9
    assert product(cube(1), cube(1)).n == 4
    EZ = edge_zonotope(cube(2))
    assert EZ.n == 4


def test_facets():
    assert len(facets_bruteforce(make_polytope(SQUARE))) == 4
    assert len(facets_bruteforce(simplex(4))) == 4
    assert len(facets_bruteforce(cube(3))) == 6
    with pytest.raises(DimensionGuard):
        facets_bruteforce(cube(5))


def test_smallest_face():
    P = make_polytope(SQUARE)
    assert smallest_face(P, {0}) == {0}
    assert smallest_face(P, {0, 1}) == {0, 1}
    assert smallest_face(P, {0, 3}) == {0, 1, 2, 3}


def test_translate_and_dilate_keep_graph():
    P = cube(2)
    assert translate(P, (1, 1)).edges == P.edges
    assert dilate(P, 3).vertices[3] == (3, 3)
    with pytest.raises(ValueError):
        dilate(P, 0)


objectives3 = st.tuples(*[st.integers(-6, 6)] * 3)


@pytest.mark.parametrize("P", [cube(3), simplex(3), prism(simplex(3)), cross_polytope(3)],
                         ids=["cube", "triangle", "prism", "octahedron"])
@given(c=objectives3)
def test_reversed_objective_swaps_ends(P, c):
    if P.dim == 4:
        c = c + (c[0] + 7,)
    try:
        ori = orient(P, c)
        rev = orient(P, tuple(-x for x in c))
    except NonGenericObjective:
        assume(False)
    assert ori.sink == rev.source and ori.source == rev.sink
    for v in range(P.n):
        indeg = len(P.neighbors(v)) - len(ori.out[v])
        assert indeg == len(rev.out[v])
    if is_simple(P):
        h = h_vector(ori)
        assert h == h_vector(rev)[::-1] == h[::-1]


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4))
def test_zonotope_vertices_have_strict_sign_vectors(gens):
    assume(all(g != (0, 0) for g in gens))
    Z = zonotope(gens)
    gens = [tuple(Fraction(x) for x in g) for g in gens]
    for v in Z.vertices:
        # v = sum eps_i g_i; the sign vector must be cut out strictly by a functional
        found = False
        from itertools import product as cp
        for eps in cp((1, -1), repeat=len(gens)):
            if tuple(sum(e * g[k] for e, g in zip(eps, gens)) for k in range(2)) != v:
                continue
            res = strict_cone_witness([tuple(e * x for x in g) for e, g in zip(eps, gens)])
            if isinstance(res, Witness):
                assert all(dot(res.w, g) * e > 0 for e, g in zip(eps, gens))
                found = True
        assert found
