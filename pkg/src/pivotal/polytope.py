"""Vertex-presented polytopes, their graphs, and objective orientations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as cartesian
from typing import Sequence

from .exact import (
    Empty,
    ExactError,
    Witness,
    dot,
    hull_vertex_test,
    is_zero,
    nullspace,
    primitive,
    rank,
    relative_interior_witness,
    sub,
    fmt_vec,
    neg,
)
from .fans import MinkowskiFan


class NotAVertex(ExactError):
    pass


class NonGenericObjective(ExactError):
    pass


class NotSimple(ExactError):
    pass


class ZeroGenerator(ExactError):
    pass


class DimensionGuard(ExactError):
    pass


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: tuple
    edges: tuple
    name: str = ""
    _adj: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        adj = [[] for _ in self.vertices]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in adj))

    def neighbors(self, i: int) -> tuple:
        return self._adj[i]

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, point: Sequence) -> int:
        return self.vertices.index(tuple(Fraction(x) for x in point))

    @property
    def affine_dim(self) -> int:
        v0 = self.vertices[0]
        return rank([sub(v, v0) for v in self.vertices[1:]])


def _clean(vertices) -> tuple:
    pts = tuple(tuple(Fraction(x) for x in v) for v in vertices)
    if not pts:
        raise ValueError("a polytope needs at least one vertex")
    dims = {len(p) for p in pts}
    if len(dims) != 1:
        raise ValueError(f"vertices of mixed dimensions {sorted(dims)}")
    if len(set(pts)) != len(pts):
        raise ValueError("repeated vertex")
    return pts


def compute_edges(vertices: Sequence[Sequence]) -> list:
    """Index pairs {i, j} spanning an edge, certified by an exact LP each."""
    pts = _clean(vertices)
    for p in pts:
        if not hull_vertex_test(p, pts):
            raise NotAVertex(f"{fmt_vec(p)} is not a vertex of the hull")
    edges = []
    n = len(pts)
    for i in range(n):
        for j in range(i + 1, n):
            strict = [sub(pts[i], pts[k]) for k in range(n) if k != i and k != j]
            tight = [sub(pts[i], pts[j])]
            if not strict:
                edges.append((i, j))
                continue
            if isinstance(relative_interior_witness(strict, tight), Witness):
                edges.append((i, j))
    return edges


def make_polytope(vertices, edges=None, name: str = "") -> Polytope:
    pts = _clean(vertices)
    if edges is None:
        edges = compute_edges(pts)
    else:
        edges = sorted({tuple(sorted((int(a), int(b)))) for a, b in edges})
    return Polytope(len(pts[0]), pts, tuple(edges), name)


@dataclass(frozen=True)
class Orientation:
    polytope: Polytope
    c: tuple
    out: tuple  # improving neighbors per vertex, sorted
    sink: int
    source: int

    @property
    def directed_edges(self) -> list:
        return [(v, u) for v, us in enumerate(self.out) for u in us]

    def improving(self, v: int) -> tuple:
        return self.out[v]

    def level(self, v: int) -> Fraction:
        return dot(self.c, self.polytope.vertices[v])


def orient(P: Polytope, c: Sequence) -> Orientation:
    c = tuple(Fraction(x) for x in c)
    if len(c) != P.dim:
        raise ValueError(f"objective of length {len(c)} for a polytope in dimension {P.dim}")
    vals = [dot(c, v) for v in P.vertices]
    for i, j in P.edges:
        if vals[i] == vals[j]:
            raise NonGenericObjective(
                f"objective is constant on edge {fmt_vec(P.vertices[i])}--{fmt_vec(P.vertices[j])}"
            )
    out = tuple(tuple(u for u in P.neighbors(v) if vals[u] > vals[v]) for v in range(P.n))
    sinks = [v for v in range(P.n) if not out[v]]
    sources = [v for v in range(P.n) if all(vals[u] > vals[v] for u in P.neighbors(v))]
    if len(sinks) != 1 or len(sources) != 1:
        raise NonGenericObjective("orientation does not have a unique sink and source")
    return Orientation(P, c, out, sinks[0], sources[0])


def is_simple(P: Polytope) -> bool:
    d = P.affine_dim
    return all(len(P.neighbors(v)) == d for v in range(P.n))


def h_vector(ori: Orientation) -> list:
    P = ori.polytope
    if not is_simple(P):
        raise NotSimple(f"{P.name or 'polytope'} is not simple")
    d = P.affine_dim
    h = [0] * (d + 1)
    for v in range(P.n):
        indeg = len(P.neighbors(v)) - len(ori.out[v])
        h[indeg] += 1
    return h


# ---------------------------------------------------------------- builders


def simplex(d: int) -> Polytope:
    """conv(e_1, ..., e_d) in R^d."""
    if d < 1:
        raise ValueError("simplex needs d >= 1")
    pts = [tuple(Fraction(1 if k == i else 0) for k in range(d)) for i in range(d)]
    return make_polytope(pts, [(i, j) for i in range(d) for j in range(i + 1, d)],
                         name=f"simplex({d})")


def cube(d: int) -> Polytope:
    if d < 1:
        raise ValueError("cube needs d >= 1")
    pts = [tuple(Fraction(b) for b in bits) for bits in cartesian((0, 1), repeat=d)]
    return make_polytope(pts, name=f"cube({d})")


def cross_polytope(d: int) -> Polytope:
    if d < 1:
        raise ValueError("cross polytope needs d >= 1")
    pts = []
    for i in range(d):
        for s in (1, -1):
            pts.append(tuple(Fraction(s if k == i else 0) for k in range(d)))
    return make_polytope(pts, name=f"cross_polytope({d})")


def product(P: Polytope, Q: Polytope) -> Polytope:
    pts = [p + q for p in P.vertices for q in Q.vertices]
    nq = Q.n
    edges = []
    for i, j in P.edges:
        for k in range(nq):
            edges.append((i * nq + k, j * nq + k))
    for i in range(P.n):
        for k, l in Q.edges:
            edges.append((i * nq + k, i * nq + l))
    return make_polytope(pts, edges, name=f"{P.name or 'P'} x {Q.name or 'Q'}")


def segment() -> Polytope:
    return make_polytope([(Fraction(0),), (Fraction(1),)], [(0, 1)], name="segment")


def prism(P: Polytope) -> Polytope:
    return product(P, segment())


def translate(P: Polytope, t: Sequence) -> Polytope:
    t = tuple(Fraction(x) for x in t)
    return Polytope(P.dim, tuple(tuple(a + b for a, b in zip(v, t)) for v in P.vertices),
                    P.edges, P.name)


def dilate(P: Polytope, s) -> Polytope:
    s = Fraction(s)
    if s <= 0:
        raise ValueError("dilation factor must be positive")
    return Polytope(P.dim, tuple(tuple(s * x for x in v) for v in P.vertices), P.edges, P.name)


def zonotope(generators: Sequence[Sequence], name: str = "zonotope") -> Polytope:
    """Sum of segments [-z, z] over the generators."""
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    if not gens:
        raise ZeroGenerator("a zonotope needs generators")
    for g in gens:
        if is_zero(g):
            raise ZeroGenerator("zero generator")
    dim = len(gens[0])
    fan = MinkowskiFan([[g, neg(g)] for g in gens], dim)
    sels, _, edges = fan.enumerate()
    pts = [fan.point(s) for s in sels]
    return Polytope(dim, tuple(pts), tuple(edges), name)


def sign_vectors(P: Polytope, generators: Sequence[Sequence]) -> list:
    """Sign vectors realized by the vertices of zonotope(generators)."""
    gens = [tuple(Fraction(x) for x in g) for g in generators]
    fan = MinkowskiFan([[g, neg(g)] for g in gens], len(gens[0]))
    sels, wits, _ = fan.enumerate()
    return [tuple(1 if s == 0 else -1 for s in sel) for sel in sels]


def edge_directions(P: Polytope) -> list:
    return [sub(P.vertices[j], P.vertices[i]) for i, j in P.edges]


def edge_zonotope(P: Polytope) -> Polytope:
    return zonotope(edge_directions(P), name=f"EZ({P.name})")


# ---------------------------------------------------------------- faces


def _affine_chart(P: Polytope):
    """Coordinates of the vertices in an injective projection of the affine hull."""
    v0 = P.vertices[0]
    diffs = [sub(v, v0) for v in P.vertices[1:]]
    cols: list = []
    for col in range(P.dim):
        if rank([[d[c] for c in cols + [col]] for d in diffs]) > len(cols):
            cols.append(col)
    return cols


def facets_bruteforce(P: Polytope) -> list:
    """Facet inequalities (normal, rhs) with normal.x <= rhs on P.

    Normals are supported on a coordinate chart of the affine hull, so they
    are valid linear functionals on the ambient space."""
    k = P.affine_dim
    if k > 4:
        raise DimensionGuard(f"facet enumeration is limited to dimension 4, got {k}")
    if k == 0:
        return []
    cols = _affine_chart(P)
    pts = [tuple(v[c] for c in cols) for v in P.vertices]
    found = {}
    for subset in combinations(range(len(pts)), k):
        base = pts[subset[0]]
        diffs = [sub(pts[i], base) for i in subset[1:]]
        if k > 1 and rank(diffs) < k - 1:
            continue
        ns = nullspace(diffs, k) if diffs else [tuple(Fraction(1 if j == 0 else 0) for j in range(k))]
        if len(ns) != 1:
            continue
        normal = ns[0]
        rhs = dot(normal, base)
        vals = [dot(normal, p) for p in pts]
        if all(v <= rhs for v in vals):
            pass
        elif all(v >= rhs for v in vals):
            normal = neg(normal)
            rhs = -rhs
        else:
            continue
        if all(dot(normal, p) == rhs for p in pts):
            continue
        key = primitive(normal + (rhs,))
        if key not in found:
            amb = [Fraction(0)] * P.dim
            for c, x in zip(cols, normal):
                amb[c] = x
            found[key] = (tuple(amb), rhs)
    return sorted(found.values())


def facet_vertex_sets(P: Polytope) -> list:
    out = []
    for normal, rhs in facets_bruteforce(P):
        out.append(frozenset(i for i, v in enumerate(P.vertices) if dot(normal, v) == rhs))
    return out


def smallest_face(P: Polytope, S, facets=None) -> frozenset:
    S = frozenset(S)
    if not S:
        raise ValueError("smallest_face needs a nonempty vertex set")
    sets = facets if facets is not None else facet_vertex_sets(P)
    face = frozenset(range(P.n))
    for F in sets:
        if S <= F:
            face &= F
    return face
