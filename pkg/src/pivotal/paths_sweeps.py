"""Monotone paths, sweep polytopes, normal fan comparisons and cellularity."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

from .exact import (
    add,
    DimensionMismatch,
    ExactError,
    Witness,
    dot,
    hull_vertex_test,
    in_cone,
    neg,
    scale,
    strict_cone_witness,
    sub,
    vsum,
)
from .fans import EnumerationGuard, guard_limit, sweeps as _sweeps
from .pivot_polytopes import (
    ConstructedPolytope,
    MultiArborescence,
    pivot_polytope,
)
from .polytope import (
    Orientation,
    Polytope,
    compute_edges,
    edge_directions,
    facet_vertex_sets,
    make_polytope,
    orient,
    smallest_face,
    zonotope,
)
from .rules import MS, TieDetected, shadow_vertex_path


class NotNormallyEquivalent(ExactError):
    pass


PATH_GUARD = 20_000

AnyPolytope = Union[Polytope, ConstructedPolytope]


def monotone_paths(ori: Orientation, guard: int | None = None) -> list:
    """All c-increasing edge paths from the source to the sink."""
    limit = guard if guard is not None else guard_limit(PATH_GUARD)
    out = []
    stack = [(ori.source, (ori.source,))]
    while stack:
        v, path = stack.pop()
        if v == ori.sink:
            out.append(path)
            if len(out) > limit:
                raise EnumerationGuard(f"more than {limit} monotone paths")
            continue
        for u in reversed(ori.out[v]):
            stack.append((u, path + (u,)))
    return sorted(out)


def path_point(ori: Orientation, W: Sequence[int]) -> tuple:
    """Average of the path over the objective range: each edge contributes its
    midpoint weighted by its share of the total gain."""
    P = ori.polytope
    verts = [P.vertices[i] for i in W]
    total = dot(ori.c, sub(verts[-1], verts[0]))
    steps = []
    for a, b in zip(verts, verts[1:]):
        share = dot(ori.c, sub(b, a)) / total
        steps.append(scale(share / 2, add(a, b)))
    return vsum(steps, P.dim)


def monotone_path_polytope(ori: Orientation, guard: int | None = None) -> ConstructedPolytope:
    paths = monotone_paths(ori, guard)
    points = {}
    for W in paths:
        points.setdefault(path_point(ori, W), []).append(W)
    allpts = list(points)
    verts = sorted(p for p in allpts if hull_vertex_test(p, allpts))
    labels = []
    for p in verts:
        if len(points[p]) != 1:
            raise AssertionError("two monotone paths share a vertex point")
        labels.append(points[p][0])
    edges = compute_edges(verts) if len(verts) > 1 else []
    return ConstructedPolytope(ori.polytope.dim, tuple(verts), tuple(labels), tuple(edges), (),
                               "monotone")


def _unique_argmax(P: Polytope, w) -> int:
    vals = [dot(w, v) for v in P.vertices]
    m = max(vals)
    tied = [i for i, x in enumerate(vals) if x == m]
    if len(tied) != 1:
        raise TieDetected(-1, tied)
    return tied[0]


def coherent_path_for_weight(ori: Orientation, w: Sequence, check: bool = True) -> tuple:
    """Max-slope path through the w-maximal vertex, glued from two shadow paths."""
    P = ori.polytope
    w = tuple(Fraction(x) for x in w)
    r = _unique_argmax(P, w)
    up = shadow_vertex_path(ori, w, r)
    down = shadow_vertex_path(orient(P, neg(ori.c)), w, r)
    path = tuple(reversed(down)) + tuple(up[1:])
    if check:
        scores = {W: dot(w, path_point(ori, W)) for W in monotone_paths(ori)}
        best = max(scores.values())
        winners = [W for W, s in scores.items() if s == best]
        if winners != [path]:
            raise AssertionError("glued shadow path is not the w-maximal monotone path")
    return path


# ---------------------------------------------------------------- sweeps


def sweeps(points: Sequence[Sequence], guard: int | None = None) -> list:
    """Orderings of the points (increasing) realized by generic functionals."""
    return _sweeps(points, guard)[0]


def sweep_vertex(points: Sequence[Sequence], ordering: Sequence[int]) -> tuple:
    n = len(ordering)
    dim = len(points[0])
    return vsum((scale(2 * k - (n - 1), points[i]) for k, i in enumerate(ordering)), dim)


def sweep_polytope(points: Sequence[Sequence], guard: int | None = None) -> ConstructedPolytope:
    pts = [tuple(Fraction(x) for x in p) for p in points]
    orders, wits, edges = _sweeps(pts, guard)
    verts = [sweep_vertex(pts, o) for o in orders]
    ranked = sorted(range(len(orders)), key=lambda i: verts[i])
    index = {old: new for new, old in enumerate(ranked)}
    return ConstructedPolytope(
        len(pts[0]),
        tuple(verts[i] for i in ranked),
        tuple(orders[i] for i in ranked),
        tuple(sorted(tuple(sorted((index[a], index[b]))) for a, b in edges)),
        tuple(wits[i] for i in ranked),
        "sweep",
    )


def ed_points(P: AnyPolytope) -> list:
    """Edge directions u - v in both orientations, without repeats."""
    Q = _as_polytope(P)
    out = set()
    for d in edge_directions(Q):
        out.add(d)
        out.add(neg(d))
    return sorted(out)


# ---------------------------------------------------------------- normal fans


def _as_polytope(X: AnyPolytope) -> Polytope:
    if isinstance(X, ConstructedPolytope):
        X = X.as_polytope()
    if X.n > 1 and not X.edges:
        X = make_polytope(X.vertices, compute_edges(X.vertices), X.name)
    return X


def is_weak_summand(Q: AnyPolytope, P: AnyPolytope) -> bool:
    """True iff the normal fan of P refines the normal fan of Q."""
    Qp = _as_polytope(Q)
    Pp = _as_polytope(P)
    if Qp.dim != Pp.dim:
        raise DimensionMismatch(f"polytopes in dimensions {Qp.dim} and {Pp.dim}")
    if Qp.n == 1:
        return True
    for v in range(Pp.n):
        gens = [sub(Pp.vertices[x], Pp.vertices[v]) for x in Pp.neighbors(v)]
        if gens:
            res = strict_cone_witness([neg(g) for g in gens])
            if not isinstance(res, Witness):
                raise AssertionError("vertex without an open normal cone")
            w = res.w
        else:
            w = tuple(Fraction(0) for _ in range(Pp.dim))
        vals = [dot(w, q) for q in Qp.vertices]
        m = max(vals)
        tops = [i for i, x in enumerate(vals) if x == m]
        if len(tops) != 1:
            return False
        u = tops[0]
        for x in Qp.neighbors(u):
            if not in_cone(sub(Qp.vertices[x], Qp.vertices[u]), gens):
                return False
    return True


def normally_equivalent(P: AnyPolytope, Q: AnyPolytope) -> bool:
    return is_weak_summand(P, Q) and is_weak_summand(Q, P)


def is_belt(P: AnyPolytope) -> bool:
    Pp = _as_polytope(P)
    return normally_equivalent(Pp, zonotope(edge_directions(Pp)))


# ---------------------------------------------------------------- cellularity


def is_cellular(ori: Orientation, M: MultiArborescence) -> bool:
    P = ori.polytope
    facets = facet_vertex_sets(P)

    def carrier(v: int) -> frozenset:
        return smallest_face(P, {v} | set(M[v]), facets)

    u = ori.source
    seen = set()
    while True:
        if u in seen:
            raise AssertionError("face chain does not advance")
        seen.add(u)
        F = carrier(u)
        top = max(F, key=lambda x: ori.level(x))
        for v in F:
            if v != top and not set(M[v]) <= F:
                return False
        if top == u:
            return u == ori.sink
        u = top


# ---------------------------------------------------------------- invariance


def ms_invariance_check(P: Polytope, P2: Polytope, c: Sequence) -> bool:
    if not normally_equivalent(P, P2):
        raise NotNormallyEquivalent("the two polytopes have different normal fans")
    a = pivot_polytope(orient(P, c), MS)
    b = pivot_polytope(orient(P2, c), MS)
    return sorted(a.points) == sorted(b.points)
