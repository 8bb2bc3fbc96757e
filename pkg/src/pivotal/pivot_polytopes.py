"""Pivot rule polytopes, neighbotopes, coherence and face queries."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from math import prod
from typing import Mapping, Sequence

from .exact import (
    Empty,
    ExactError,
    Witness,
    dot,
    fmt,
    in_hull,
    lp_solve,
    LinearProgram,
    Constraint,
    Optimal,
    primitive,
    relative_interior_witness,
    strict_cone_witness,
    sub,
    vsum,
)
from .fans import EnumerationGuard, MinkowskiFan, guard_limit, sweeps
from .polytope import Orientation, Polytope, facets_bruteforce, h_vector, is_simple
from .rules import (
    Arborescence,
    Normalization,
    TieDetected,
    UnsupportedNormalization,
    arborescence,
    check_c_arborescence,
)


class NotCoherent(ExactError):
    pass


@dataclass(frozen=True)
class Incoherent:
    pass


@dataclass(frozen=True)
class MultiArborescence:
    choice: tuple  # frozenset of vertex indices per vertex
    directed: bool = True

    def __getitem__(self, v: int) -> frozenset:
        return self.choice[v]

    def __len__(self) -> int:
        return len(self.choice)

    @staticmethod
    def of(A: Arborescence | Sequence[int], directed: bool = True) -> "MultiArborescence":
        parent = A.parent if isinstance(A, Arborescence) else tuple(A)
        return MultiArborescence(tuple(frozenset([p]) for p in parent), directed)

    def is_singleton(self) -> bool:
        return all(len(s) == 1 for s in self.choice)

    def to_json(self) -> dict:
        return {str(v): sorted(s) for v, s in enumerate(self.choice)}


@dataclass(frozen=True)
class ConstructedPolytope:
    dim: int
    points: tuple
    labels: tuple
    edges: tuple = ()
    witnesses: tuple = ()
    kind: str = ""

    @property
    def n(self) -> int:
        return len(self.points)

    def as_polytope(self) -> Polytope:
        return Polytope(self.dim, tuple(self.points), tuple(self.edges), self.kind)

    def to_json(self) -> dict:
        labels = []
        for i, lab in enumerate(self.labels):
            if isinstance(lab, Arborescence):
                labels.append({"point": i, "arborescence": lab.to_json()})
            elif hasattr(lab, "to_json"):
                labels.append({"point": i, "branching": lab.to_json()})
            else:
                key = "path" if self.kind == "monotone" else "ordering"
                labels.append({"point": i, key: list(lab)})
        return {
            "dim": self.dim,
            "kind": self.kind,
            "vertices": [[fmt(x) for x in p] for p in self.points],
            "edges": [list(e) for e in self.edges],
            "labels": labels,
        }


def _require_rational(N: Normalization) -> None:
    if not N.rational:
        raise UnsupportedNormalization("constructed points need a rational normalization (not l2)")


def normalized_direction(P: Polytope, N: Normalization, v: int, u: int, c=None) -> tuple:
    return N.normalized(sub(P.vertices[u], P.vertices[v]), c)


def local_summand(ori: Orientation, N: Normalization, v: int, undirected: bool = False) -> set:
    """Points spanning the local summand at ``v``.

    With ``undirected`` the neighbors in every direction and ``v`` itself
    (as the origin) are included."""
    _require_rational(N)
    P = ori.polytope
    if undirected:
        out = {N.normalized(sub(P.vertices[u], P.vertices[v])) for u in P.neighbors(v)}
        out.add(tuple(Fraction(0) for _ in range(P.dim)))
        return out
    return {normalized_direction(P, N, v, u, ori.c) for u in ori.out[v]}


def phi_point(P: Polytope, N: Normalization, A, c: Sequence | None = None) -> tuple:
    """Sum of normalized steps (A(v) - v) over all vertices; fixed points add 0."""
    _require_rational(N)
    parent = A.parent if isinstance(A, Arborescence) else tuple(A)
    steps = []
    for v, u in enumerate(parent):
        if u != v:
            steps.append(normalized_direction(P, N, v, u, c))
    return vsum(steps, P.dim)


# ---------------------------------------------------------------- coherence


def _coherence_directions(ori: Orientation, N: Normalization, A) -> list:
    P = ori.polytope
    dirs = []
    for v in range(P.n):
        if v == ori.sink:
            continue
        chosen = normalized_direction(P, N, v, A[v], ori.c)
        for u in ori.out[v]:
            if u != A[v]:
                dirs.append(sub(chosen, normalized_direction(P, N, v, u, ori.c)))
    return dirs


def is_coherent(ori: Orientation, N: Normalization, A: Arborescence):
    """Witness(w) if some weight realizes A, else Incoherent()."""
    _require_rational(N)
    check_c_arborescence(ori, A)
    dirs = _coherence_directions(ori, N, A)
    if not dirs:
        return Witness(tuple(Fraction(0) for _ in range(ori.polytope.dim)))
    res = strict_cone_witness(dirs)
    if isinstance(res, Empty):
        return Incoherent()
    if arborescence(ori, N, res.w) != A:
        raise AssertionError("coherence witness does not reproduce the arborescence")
    return res


def directed_fan(ori: Orientation, N: Normalization):
    """Minkowski fan of the local summands, with the vertex each option points to."""
    _require_rational(N)
    P = ori.polytope
    movers = [v for v in range(P.n) if v != ori.sink]
    summands, targets = [], []
    for v in movers:
        summands.append([normalized_direction(P, N, v, u, ori.c) for u in ori.out[v]])
        targets.append(list(ori.out[v]))
    return MinkowskiFan(summands, P.dim), movers, targets


def _selection_to_parent(n: int, root_map: dict, movers, targets, sel) -> tuple:
    parent = list(range(n))
    for v, opts, i in zip(movers, targets, sel):
        parent[v] = opts[i]
    for v, p in root_map.items():
        parent[v] = p
    return tuple(parent)


def ed_directions(ori: Orientation, N: Normalization) -> list:
    """Distinct normalized improving directions, sorted."""
    P = ori.polytope
    dirs = {normalized_direction(P, N, v, u, ori.c) for v in range(P.n) for u in ori.out[v]}
    return sorted(dirs)


def _coherent_via_sweeps(ori: Orientation, N: Normalization, guard: int | None):
    P = ori.polytope
    dirs = ed_directions(ori, N)
    if not dirs:
        return [(Arborescence(tuple(range(P.n)), ori.sink), tuple(Fraction(0) for _ in range(P.dim)))]
    orders, wits, _ = sweeps(dirs, guard)
    found = {}
    for order, w in zip(orders, wits):
        rank = {dirs[i]: r for r, i in enumerate(order)}
        parent = list(range(P.n))
        for v in range(P.n):
            if v == ori.sink:
                continue
            parent[v] = max(ori.out[v], key=lambda u: rank[normalized_direction(P, N, v, u, ori.c)])
        A = Arborescence(tuple(parent), ori.sink)
        if A not in found:
            found[A] = w
    return list(found.items())


def enumerate_coherent(ori: Orientation, N: Normalization, method: str = "fan",
                       guard: int | None = None) -> list:
    """Coherent arborescences with a realizing weight each, sorted by their points.

    ``method="fan"`` walks the normal fan of the pivot polytope directly;
    ``method="sweeps"`` enumerates orderings of the normalized improving
    directions and reads off the per-vertex maximum."""
    _require_rational(N)
    P = ori.polytope
    if method == "sweeps":
        pairs = _coherent_via_sweeps(ori, N, guard)
    elif method == "fan":
        fan, movers, targets = directed_fan(ori, N)
        if not movers:
            pairs = [(Arborescence((0,), 0), tuple(Fraction(0) for _ in range(P.dim)))]
        else:
            sels, wits, _ = fan.enumerate(guard)
            pairs = []
            for sel, w in zip(sels, wits):
                parent = _selection_to_parent(P.n, {ori.sink: ori.sink}, movers, targets, sel)
                pairs.append((Arborescence(parent, ori.sink), w))
    else:
        raise ValueError(f"unknown enumeration method {method!r}")
    for A, w in pairs:
        if arborescence(ori, N, w) != A:
            raise AssertionError("enumerated witness does not reproduce its arborescence")
    return sorted(pairs, key=lambda aw: (phi_point(P, N, aw[0], ori.c), aw[0].parent))


def count_all_arborescences(ori: Orientation) -> int:
    return prod(len(ori.out[v]) for v in range(ori.polytope.n) if v != ori.sink)


def enumerate_all_arborescences(ori: Orientation, guard: int | None = None) -> list:
    limit = guard if guard is not None else guard_limit()
    total = count_all_arborescences(ori)
    if total > limit:
        raise EnumerationGuard(f"{total} arborescences exceed the guard {limit}")
    P = ori.polytope
    movers = [v for v in range(P.n) if v != ori.sink]
    out = []
    for choice in cartesian(*(ori.out[v] for v in movers)):
        parent = list(range(P.n))
        for v, u in zip(movers, choice):
            parent[v] = u
        out.append(Arborescence(tuple(parent), ori.sink))
    return out


def brute_force_coherent(ori: Orientation, N: Normalization, guard: int | None = None) -> list:
    """Oracle: all arborescences filtered by the coherence LP."""
    out = []
    for A in enumerate_all_arborescences(ori, guard):
        if isinstance(is_coherent(ori, N, A), Witness):
            out.append(A)
    return sorted(out, key=lambda A: (phi_point(ori.polytope, N, A, ori.c), A.parent))


def pivot_polytope(ori: Orientation, N: Normalization, guard: int | None = None) -> ConstructedPolytope:
    _require_rational(N)
    P = ori.polytope
    fan, movers, targets = directed_fan(ori, N)
    if not movers:
        A = Arborescence((0,), 0)
        return ConstructedPolytope(P.dim, (phi_point(P, N, A, ori.c),), (A,), (),
                                   (tuple(Fraction(0) for _ in range(P.dim)),), "pivot")
    sels, wits, edges = fan.enumerate(guard)
    labels, points = [], []
    for sel in sels:
        parent = _selection_to_parent(P.n, {ori.sink: ori.sink}, movers, targets, sel)
        A = Arborescence(parent, ori.sink)
        labels.append(A)
        points.append(fan.point(sel))
    for A, pt in zip(labels, points):
        if phi_point(P, N, A, ori.c) != pt:
            raise AssertionError("Minkowski decomposition disagrees with the arborescence point")
    return ConstructedPolytope(P.dim, tuple(points), tuple(labels), tuple(edges), tuple(wits), "pivot")


def undirected_fan(P: Polytope, N: Normalization):
    if N.depends_on_objective():
        raise UnsupportedNormalization("the neighbotope needs a normalization independent of c")
    _require_rational(N)
    summands, targets = [], []
    origin = tuple(Fraction(0) for _ in range(P.dim))
    for v in range(P.n):
        opts = [v] + list(P.neighbors(v))
        summands.append([origin] + [N.normalized(sub(P.vertices[u], P.vertices[v]))
                                    for u in P.neighbors(v)])
        targets.append(opts)
    return MinkowskiFan(summands, P.dim), list(range(P.n)), targets


def neighbotope(P: Polytope, N: Normalization, guard: int | None = None) -> ConstructedPolytope:
    fan, movers, targets = undirected_fan(P, N)
    sels, wits, edges = fan.enumerate(guard)
    labels, points = [], []
    for sel in sels:
        parent = tuple(targets[v][i] for v, i in enumerate(sel))
        roots = [v for v, p in enumerate(parent) if p == v]
        if len(roots) != 1:
            raise AssertionError("coherent branching without a unique sink")
        labels.append(Arborescence(parent, roots[0]))
        points.append(fan.point(sel))
    return ConstructedPolytope(P.dim, tuple(points), tuple(labels), tuple(edges), tuple(wits),
                               "neighbotope")


def neighbotope_via_sweeps(P: Polytope, N: Normalization, guard: int | None = None) -> list:
    """Vertices of the neighbotope read off from orderings of ED^N(P) plus the origin."""
    fan, movers, targets = undirected_fan(P, N)
    origin = tuple(Fraction(0) for _ in range(P.dim))
    dirs = sorted({p for s in fan.summands for p in s if p != origin})
    pts = dirs + [origin]
    orders, wits, _ = sweeps(pts, guard)
    found = set()
    for order in orders:
        rank = {pts[i]: r for r, i in enumerate(order)}
        sel = tuple(max(range(len(s)), key=lambda i: rank[s[i]]) for s in fan.summands)
        found.add(fan.point(sel))
    return sorted(found)


# ---------------------------------------------------------------- faces


def face_for_weight(ori: Orientation, N: Normalization, w: Sequence) -> MultiArborescence:
    P = ori.polytope
    w = tuple(Fraction(x) for x in w)
    choice = []
    for v in range(P.n):
        if v == ori.sink:
            choice.append(frozenset([v]))
            continue
        keyed = [(N.slope(w, sub(P.vertices[u], P.vertices[v]), ori.c), u) for u in ori.out[v]]
        best = max(k for k, _ in keyed)
        choice.append(frozenset(u for k, u in keyed if k == best))
    return MultiArborescence(tuple(choice), True)


def _weak_constraints(ori: Orientation, N: Normalization, A) -> list:
    return _coherence_directions(ori, N, A)


def finest_coherent_coarsening(ori: Orientation, N: Normalization, A: Arborescence) -> MultiArborescence:
    _require_rational(N)
    check_c_arborescence(ori, A)
    cons = _weak_constraints(ori, N, A)
    d = ori.polytope.dim
    if not cons:
        return MultiArborescence.of(A)
    implicit, free = [], []
    box = []
    for i in range(d):
        e = [Fraction(0)] * d
        e[i] = Fraction(1)
        box.append(Constraint(tuple(e), Fraction(1)))
        e[i] = Fraction(-1)
        box.append(Constraint(tuple(e), Fraction(1)))
    weak = [Constraint(tuple(-x for x in g), Fraction(0)) for g in cons]
    for g in cons:
        res = lp_solve(LinearProgram(tuple(g), tuple(weak + box)))
        assert isinstance(res, Optimal)
        (free if res.value > 0 else implicit).append(g)
    wit = relative_interior_witness(free, implicit) if free else Witness(tuple(Fraction(0) for _ in range(d)))
    if not isinstance(wit, Witness):
        raise AssertionError("relative interior of the weight cone is empty")
    M = face_for_weight(ori, N, wit.w)
    if not refines(MultiArborescence.of(A), M):
        raise AssertionError("coarsening does not contain the arborescence")
    return M


def refines(M, M2) -> bool:
    a = M if isinstance(M, MultiArborescence) else MultiArborescence.of(M)
    b = M2 if isinstance(M2, MultiArborescence) else MultiArborescence.of(M2)
    return all(x <= y for x, y in zip(a.choice, b.choice))


def differ_by_rerouting(A, A2) -> bool:
    p = A.parent if isinstance(A, Arborescence) else tuple(A)
    q = A2.parent if isinstance(A2, Arborescence) else tuple(A2)
    return sum(1 for x, y in zip(p, q) if x != y) == 1


def face_witness(ori: Orientation, N: Normalization, M: MultiArborescence):
    """Weight whose face is exactly M, or Empty."""
    P = ori.polytope
    strict, tight = [], []
    for v in range(P.n):
        if v == ori.sink:
            continue
        chosen = sorted(M[v])
        base = normalized_direction(P, N, v, chosen[0], ori.c)
        for u in chosen[1:]:
            tight.append(sub(base, normalized_direction(P, N, v, u, ori.c)))
        for u in ori.out[v]:
            if u not in M[v]:
                strict.append(sub(base, normalized_direction(P, N, v, u, ori.c)))
    if not strict and not tight:
        return Witness(tuple(Fraction(0) for _ in range(P.dim)))
    return relative_interior_witness(strict, tight)


def are_adjacent_vertices(ori: Orientation, N: Normalization, A: Arborescence, A2: Arborescence) -> bool:
    """True iff the points of A and A2 span an edge of the pivot polytope."""
    for X in (A, A2):
        if not isinstance(is_coherent(ori, N, X), Witness):
            raise NotCoherent("adjacency is only defined for coherent arborescences")
    if A == A2:
        return False
    union = MultiArborescence(tuple(frozenset([a, b]) for a, b in zip(A.parent, A2.parent)))
    if not isinstance(face_witness(ori, N, union), Witness):
        return False
    P = ori.polytope
    lines = set()
    for v in range(P.n):
        if v != ori.sink and A[v] != A2[v]:
            g = sub(normalized_direction(P, N, v, A[v], ori.c), normalized_direction(P, N, v, A2[v], ori.c))
            lines.add(primitive(g) if g > tuple(-x for x in g) else primitive(tuple(-x for x in g)))
    # the face is the sum of the segments that change; an edge iff they are parallel
    return len(lines) == 1


# ---------------------------------------------------------------- counts


def multiarb_count(ori: Orientation) -> int:
    if not is_simple(ori.polytope):
        from .polytope import NotSimple
        raise NotSimple("multi-arborescence count is stated for simple polytopes")
    return prod(2 ** len(ori.out[v]) - 1 for v in range(ori.polytope.n) if v != ori.sink)


def h_product(ori: Orientation) -> int:
    h = h_vector(ori)
    return prod(i ** h[i] for i in range(1, len(h)))


def ub_theorem_margin(ori: Orientation, N: Normalization, coherent_count: int | None = None) -> tuple:
    """(#coherent, h-product - 2(n - m - 2)); asserts strictness when applicable."""
    P = ori.polytope
    h_prod = h_product(ori)
    n = P.n
    m = len(facets_bruteforce(P))
    bound = h_prod - 2 * (n - m - 2)
    count = coherent_count if coherent_count is not None else len(enumerate_coherent(ori, N))
    d = P.affine_dim
    if n > d + 1 >= 4 and not count < bound:
        raise AssertionError(f"coherent count {count} reaches the bound {bound}")
    return count, bound


def neighbotope_bound(P: Polytope) -> Fraction:
    d = P.affine_dim
    return Fraction(d) ** P.n * (1 - Fraction(1, d ** (d + 1)))


def corollary_membership(P: Polytope, N: Normalization, objectives: Sequence[Sequence],
                         nb: ConstructedPolytope | None = None) -> bool:
    """Every pivot polytope vertex for the sampled objectives lies in the neighbotope."""
    from .polytope import orient

    nb = nb if nb is not None else neighbotope(P, N)
    for c in objectives:
        ori = orient(P, c)
        for A, _ in enumerate_coherent(ori, N):
            if not in_hull(phi_point(P, N, A, ori.c), nb.points):
                return False
    return True
