"""Normalized-weight pivot rules evaluated exactly."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Mapping, Sequence

from .exact import ExactError, dot, fmt, fmt_vec, sub
from .polytope import Orientation, Polytope, orient


class TieDetected(ExactError):
    def __init__(self, vertex: int, tied):
        self.vertex = vertex
        self.tied = frozenset(tied)
        super().__init__(f"argmax at vertex {vertex} is attained by {sorted(self.tied)}")


class SinkHasNoStep(ExactError):
    pass


class MSRequiresImproving(ExactError):
    pass


class UnsupportedNormalization(ExactError):
    pass


class NotEdgeGeneric(ExactError):
    pass


class InvalidArborescence(ExactError):
    pass


KINDS = ("gi", "l1", "l2", "linf", "ms", "custom")


@dataclass(frozen=True)
class Normalization:
    """How an edge direction is scaled before weighting.

    ``gi`` divides by 1, ``l1``/``l2``/``linf`` by the p-norm of the
    direction, ``ms`` by the objective gain, and ``custom`` looks the
    direction up in ``table`` with ``default`` as fallback."""

    kind: str
    table: tuple = ()
    default: Fraction = Fraction(1)
    _lookup: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown normalization {self.kind!r}")
        if self.kind == "custom":
            lookup = {}
            for d, val in self.table:
                val = Fraction(val)
                if val <= 0:
                    raise ValueError("custom normalization values must be positive")
                lookup[tuple(Fraction(x) for x in d)] = val
            if Fraction(self.default) <= 0:
                raise ValueError("custom default must be positive")
            object.__setattr__(self, "_lookup", lookup)

    @property
    def rational(self) -> bool:
        return self.kind != "l2"

    def depends_on_objective(self) -> bool:
        return self.kind == "ms"

    def value(self, direction: Sequence, c: Sequence | None = None) -> Fraction:
        """Rational normalization of ``direction`` (not available for l2)."""
        if self.kind == "gi":
            return Fraction(1)
        if self.kind == "l1":
            return sum((abs(x) for x in direction), Fraction(0))
        if self.kind == "linf":
            return max(abs(x) for x in direction)
        if self.kind == "ms":
            if c is None:
                raise UnsupportedNormalization("max-slope normalization needs an objective")
            gain = dot(c, direction)
            if gain <= 0:
                raise MSRequiresImproving(f"direction {fmt_vec(direction)} is not improving")
            return gain
        if self.kind == "custom":
            key = tuple(Fraction(x) for x in direction)
            return self._lookup.get(key, Fraction(self.default))
        raise UnsupportedNormalization("the l2 normalization is irrational; use slope()")

    def normalized(self, direction: Sequence, c: Sequence | None = None) -> tuple:
        if all(x == 0 for x in direction):
            return tuple(Fraction(0) for _ in direction)
        if not self.rational:
            raise UnsupportedNormalization("l2-normalized points are irrational")
        val = self.value(direction, c)
        return tuple(x / val for x in direction)

    def slope(self, w: Sequence, direction: Sequence, c: Sequence | None = None):
        a = dot(w, direction)
        if self.kind == "l2":
            return SlopeValue(a, sum((x * x for x in direction), Fraction(0)))
        return a / self.value(direction, c)

    def label(self) -> str:
        return self.kind


GI = Normalization("gi")
L1 = Normalization("l1")
L2 = Normalization("l2")
LINF = Normalization("linf")
MS = Normalization("ms")


def custom(table: Mapping, default) -> Normalization:
    return Normalization("custom", tuple(sorted((tuple(k), Fraction(v)) for k, v in table.items())),
                         Fraction(default))


def parse_normalization(name: str) -> Normalization:
    key = name.strip().lower()
    table = {"gi": GI, "l1": L1, "l2": L2, "linf": LINF, "ms": MS}
    if key not in table:
        raise ValueError(f"unknown normalization {name!r}; expected one of gi, l1, l2, linf, ms")
    return table[key]


@total_ordering
@dataclass(frozen=True)
class SlopeValue:
    """The real number a / sqrt(s) with s > 0, compared exactly."""

    a: Fraction
    s: Fraction

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("SlopeValue needs a positive radicand")

    def _cmp(self, other) -> int:
        if not isinstance(other, SlopeValue):
            other = SlopeValue(Fraction(other), Fraction(1))
        sa = (self.a > 0) - (self.a < 0)
        sb = (other.a > 0) - (other.a < 0)
        if sa != sb:
            return (sa > sb) - (sa < sb)
        if sa == 0:
            return 0
        lhs = self.a * self.a * other.s
        rhs = other.a * other.a * self.s
        raw = (lhs > rhs) - (lhs < rhs)
        return raw if sa > 0 else -raw

    def __eq__(self, other) -> bool:
        return self._cmp(other) == 0

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __hash__(self):
        return hash((self.a * self.a / self.s, self.a > 0))


@dataclass(frozen=True)
class Arborescence:
    parent: tuple  # parent[v] for every vertex index
    root: int

    def __post_init__(self):
        n = len(self.parent)
        if not 0 <= self.root < n or self.parent[self.root] != self.root:
            raise InvalidArborescence("root must be its own parent")
        for v, p in enumerate(self.parent):
            if v != self.root and p == v:
                raise InvalidArborescence(f"vertex {v} is a second fixed point")
        for v in range(n):
            seen = set()
            u = v
            while u != self.root:
                if u in seen:
                    raise InvalidArborescence(f"cycle through vertex {u}")
                seen.add(u)
                u = self.parent[u]

    def __getitem__(self, v: int) -> int:
        return self.parent[v]

    def __len__(self) -> int:
        return len(self.parent)

    def to_json(self) -> dict:
        return {"root": self.root, "parent": {str(v): p for v, p in enumerate(self.parent)}}

    @staticmethod
    def from_json(data: Mapping) -> "Arborescence":
        parent = data["parent"]
        n = len(parent)
        return Arborescence(tuple(int(parent[str(v)]) for v in range(n)), int(data["root"]))


def check_c_arborescence(ori: Orientation, A: Arborescence) -> None:
    if A.root != ori.sink:
        raise InvalidArborescence("root is not the sink of the orientation")
    for v in range(len(A)):
        if v != ori.sink and A[v] not in ori.out[v]:
            raise InvalidArborescence(f"parent of {v} is not an improving neighbor")


def _argmax(vertex: int, keyed: list):
    best = max(k for k, _ in keyed)
    tied = [u for k, u in keyed if k == best]
    if len(tied) != 1:
        raise TieDetected(vertex, tied)
    return tied[0]


def nw_step(ori: Orientation, N: Normalization, w: Sequence, v: int) -> int:
    if v == ori.sink:
        raise SinkHasNoStep(f"vertex {v} is the optimum")
    P = ori.polytope
    w = tuple(Fraction(x) for x in w)
    keyed = []
    for u in ori.out[v]:
        d = sub(P.vertices[u], P.vertices[v])
        if N.kind == "ms" and dot(ori.c, d) <= 0:
            raise MSRequiresImproving(f"edge {v}->{u} does not improve the objective")
        keyed.append((N.slope(w, d, ori.c), u))
    return _argmax(v, keyed)


def arborescence(ori: Orientation, N: Normalization, w: Sequence) -> Arborescence:
    parent = [nw_step(ori, N, w, v) if v != ori.sink else v for v in range(ori.polytope.n)]
    A = Arborescence(tuple(parent), ori.sink)
    check_c_arborescence(ori, A)
    return A


def branching_for_objective(P: Polytope, N: Normalization, c: Sequence) -> Arborescence:
    """Per vertex, the neighbor (or the vertex itself) maximizing the normalized gain."""
    if N.depends_on_objective():
        raise UnsupportedNormalization("the max-slope normalization depends on the objective")
    c = tuple(Fraction(x) for x in c)
    parent = []
    for v in range(P.n):
        keyed = [(Fraction(0) if N.rational else SlopeValue(Fraction(0), Fraction(1)), v)]
        for u in P.neighbors(v):
            d = sub(P.vertices[u], P.vertices[v])
            keyed.append((N.slope(c, d), u))
        parent.append(_argmax(v, keyed))
    roots = [v for v, p in enumerate(parent) if p == v]
    if len(roots) != 1:
        raise TieDetected(roots[0], roots)
    return Arborescence(tuple(parent), roots[0])


def shadow_vertex_path(ori: Orientation, w: Sequence, start: int) -> list:
    """Follow the max-slope rule for weight ``w`` from ``start`` to the optimum."""
    path = [start]
    v = start
    while v != ori.sink:
        v = nw_step(ori, MS, w, v)
        path.append(v)
    return path


def check_edge_generic(P: Polytope) -> None:
    seen = {}
    for i, j in P.edges:
        d = sub(P.vertices[j], P.vertices[i])
        for key in (d, tuple(-x for x in d)):
            if key in seen:
                raise NotEdgeGeneric(f"edges {seen[key]} and {(i, j)} have equal direction vectors")
        seen[d] = (i, j)


def realize_arborescence(P: Polytope, c: Sequence, A: Arborescence) -> Normalization:
    """A custom normalization under which weight c reproduces the arborescence A."""
    check_edge_generic(P)
    ori = orient(P, c)
    check_c_arborescence(ori, A)
    gains = [abs(dot(ori.c, sub(P.vertices[j], P.vertices[i]))) for i, j in P.edges]
    kappa = 1 + max(gains) / min(gains)
    table = {}
    for v in range(P.n):
        if v != A.root:
            table[sub(P.vertices[A[v]], P.vertices[v])] = Fraction(1)
    N = custom(table, kappa)
    if arborescence(ori, N, ori.c) != A:
        raise AssertionError("custom normalization failed its round trip")
    return N


def to_dot(ori: Orientation, A: Arborescence, name: str = "arborescence") -> str:
    """Graphviz source; vertices on the same objective level share a rank."""
    P = ori.polytope
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    levels: dict = {}
    for v in range(P.n):
        levels.setdefault(ori.level(v), []).append(v)
    for v in range(P.n):
        lines.append(f'  v{v} [label="{fmt_vec(P.vertices[v])}"];')
    for lvl in sorted(levels):
        members = " ".join(f"v{v};" for v in levels[lvl])
        lines.append(f"  {{ rank=same; {members} }}  // c = {fmt(lvl)}")
    for v in range(P.n):
        if v != A.root:
            lines.append(f"  v{v} -> v{A[v]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
