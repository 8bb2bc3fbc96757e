"""Branchings on abstract graphs, greedy branchings and graphical neighbotopes."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial, prod
from typing import Hashable, Iterable, Mapping, Sequence

from .exact import ExactError, fmt, hull_vertex_test, to_fraction
from .fans import EnumerationGuard, MinkowskiFan, guard_limit
from .pivot_polytopes import ConstructedPolytope, neighbotope
from .polytope import Polytope
from .rules import GI


class NonGenericPotentials(ExactError):
    def __init__(self, u, v):
        self.pair = (u, v)
        super().__init__(f"nodes {u!r} and {v!r} carry the same potential")


class InvalidBranching(ExactError):
    pass


class NotRealizable(ExactError):
    pass


class GraphMismatch(ExactError):
    pass


class NonPositiveWeight(ExactError):
    pass


CHAMBER_THRESHOLD = 8


@dataclass(frozen=True)
class NodeGraph:
    nodes: tuple
    adj: tuple  # frozenset of neighbor indices per node
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("repeated node")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.nodes)})
        for i, nb in enumerate(self.adj):
            if i in nb:
                raise ValueError(f"loop at node {self.nodes[i]!r}")
            for j in nb:
                if i not in self.adj[j]:
                    raise ValueError("adjacency is not symmetric")

    @staticmethod
    def from_edges(nodes: Iterable[Hashable], edges: Iterable[Sequence]) -> "NodeGraph":
        nodes = tuple(nodes)
        index = {v: i for i, v in enumerate(nodes)}
        adj = [set() for _ in nodes]
        for u, v in edges:
            if u not in index or v not in index:
                raise ValueError(f"edge {u!r}-{v!r} uses an unknown node")
            if u == v:
                raise ValueError(f"loop at node {u!r}")
            adj[index[u]].add(index[v])
            adj[index[v]].add(index[u])
        return NodeGraph(nodes, tuple(frozenset(a) for a in adj))

    @staticmethod
    def of_polytope(P: Polytope) -> "NodeGraph":
        return NodeGraph.from_edges(range(P.n), P.edges)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def index(self, node) -> int:
        return self._index[node]

    def neighbors(self, i: int) -> frozenset:
        return self.adj[i]

    @property
    def edges(self) -> list:
        return sorted((i, j) for i in range(self.n) for j in self.adj[i] if i < j)

    def to_json(self) -> dict:
        return {"nodes": list(self.nodes),
                "edges": [[self.nodes[i], self.nodes[j]] for i, j in self.edges]}


def path_graph(n: int) -> NodeGraph:
    return NodeGraph.from_edges(range(1, n + 1), [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> NodeGraph:
    return NodeGraph.from_edges(range(1, n + 1), [(i, i % n + 1) for i in range(1, n + 1)])


def complete_bipartite(m: int, n: int) -> NodeGraph:
    left = [f"a{i}" for i in range(1, m + 1)]
    right = [f"b{j}" for j in range(1, n + 1)]
    return NodeGraph.from_edges(left + right, [(a, b) for a in left for b in right])


def complete_graph(n: int) -> NodeGraph:
    return NodeGraph.from_edges(range(1, n + 1), combinations(range(1, n + 1), 2))


def star_graph(leaves: int) -> NodeGraph:
    return NodeGraph.from_edges(range(leaves + 1), [(0, i) for i in range(1, leaves + 1)])


@dataclass(frozen=True)
class Branching:
    """image[i] is the index of the node that node i points to."""

    graph: NodeGraph
    image: tuple

    def __post_init__(self):
        G = self.graph
        if len(self.image) != G.n:
            raise InvalidBranching("image has the wrong length")
        for i, t in enumerate(self.image):
            if t != i and t not in G.adj[i]:
                raise InvalidBranching(f"node {G.nodes[i]!r} points to a non-neighbor")
        for i in range(G.n):
            seen = set()
            u = i
            while self.image[u] != u:
                if u in seen:
                    raise InvalidBranching(f"cycle through node {G.nodes[u]!r}")
                seen.add(u)
                u = self.image[u]

    def __getitem__(self, node):
        return self.graph.nodes[self.image[self.graph.index(node)]]

    @property
    def sinks(self) -> frozenset:
        return frozenset(self.graph.nodes[i] for i, t in enumerate(self.image) if t == i)

    def as_map(self) -> dict:
        return {self.graph.nodes[i]: self.graph.nodes[t] for i, t in enumerate(self.image)}

    def to_json(self) -> dict:
        return {"sinks": sorted(self.sinks, key=str),
                "image": {str(k): v for k, v in self.as_map().items()}}


Potentials = Mapping  # node -> rational


def _potential_vector(G: NodeGraph, c: Potentials) -> list:
    missing = [v for v in G.nodes if v not in c]
    if missing:
        raise ValueError(f"no potential for node {missing[0]!r}")
    return [to_fraction(c[v]) for v in G.nodes]


def _check_generic(G: NodeGraph, vals: Sequence[Fraction]) -> None:
    seen: dict = {}
    for i, x in enumerate(vals):
        if x in seen:
            raise NonGenericPotentials(G.nodes[seen[x]], G.nodes[i])
        seen[x] = i


def argmax_branching(G: NodeGraph, c: Potentials) -> Branching:
    """Every node points to the neighbor (or itself) of largest potential."""
    vals = _potential_vector(G, c)
    _check_generic(G, vals)
    image = tuple(max([i, *G.adj[i]], key=lambda u: vals[u]) for i in range(G.n))
    return Branching(G, image)


def _greedy_from_order(G: NodeGraph, order: Sequence[int]) -> tuple:
    marked: set = set()
    directed: set = set()
    image = [None] * G.n
    for u in order:
        marked.add(u)
        if u not in directed:
            image[u] = u
            directed.add(u)
        for v in G.adj[u]:
            if v not in marked and v not in directed:
                image[v] = u
                directed.add(v)
    return tuple(image)


def greedy_branching(G: NodeGraph, c: Potentials) -> Branching:
    """Marking algorithm: visit nodes by decreasing potential and attach
    every still undirected neighbor to the visited node."""
    vals = _potential_vector(G, c)
    _check_generic(G, vals)
    order = sorted(range(G.n), key=lambda i: vals[i], reverse=True)
    br = Branching(G, _greedy_from_order(G, order))
    if br != argmax_branching(G, c):
        raise AssertionError("marking algorithm disagrees with the pointwise argmax")
    return br


def reduced_indegree(br: Branching) -> tuple:
    counts = [0] * br.graph.n
    for t in br.image:
        counts[t] += 1
    return tuple(k - 1 for k in counts)


def potential_energy(G: NodeGraph, c: Potentials, br: Branching) -> Fraction:
    vals = _potential_vector(G, c)
    direct = sum((vals[br.image[i]] - vals[i] for i in range(G.n)), Fraction(0))
    via_degrees = sum((r * x for r, x in zip(reduced_indegree(br), vals)), Fraction(0))
    if direct != via_degrees:
        raise AssertionError("energy formulas disagree")
    return direct


def _hypergraph_fan(G: NodeGraph) -> tuple:
    summands, targets = [], []
    for v in range(G.n):
        opts = [v, *sorted(G.adj[v])]
        summands.append([tuple(Fraction(int(k == u) - int(k == v)) for k in range(G.n))
                         for u in opts])
        targets.append(opts)
    return MinkowskiFan(summands, G.n), targets


def enumerate_greedy_branchings(G: NodeGraph, method: str = "auto",
                                guard: int | None = None) -> list:
    """Distinct greedy branchings, sorted by image."""
    limit = guard if guard is not None else guard_limit()
    if method == "auto":
        method = "orders" if G.n <= CHAMBER_THRESHOLD else "chambers"
    found = set()
    if method == "orders":
        if factorial(G.n) > limit:
            raise EnumerationGuard(f"{G.n}! orders exceed the guard {limit}")
        for order in permutations(range(G.n)):
            found.add(_greedy_from_order(G, order))
    elif method == "chambers":
        fan, targets = _hypergraph_fan(G)
        sels, _, _ = fan.enumerate(limit)
        for sel in sels:
            found.add(tuple(targets[v][i] for v, i in enumerate(sel)))
    else:
        raise ValueError(f"unknown method {method!r}")
    return [Branching(G, im) for im in sorted(found)]


def _all_maps(G: NodeGraph, guard: int | None):
    limit = guard if guard is not None else guard_limit()
    total = prod(len(G.adj[i]) + 1 for i in range(G.n))
    if total > limit:
        raise EnumerationGuard(f"{total} candidate maps exceed the guard {limit}")
    options = [[i, *sorted(G.adj[i])] for i in range(G.n)]

    def rec(i, image):
        if i == G.n:
            yield tuple(image)
            return
        for t in options[i]:
            image.append(t)
            yield from rec(i + 1, image)
            image.pop()

    yield from rec(0, [])


def _eventually_fixed(image: Sequence[int]) -> bool:
    n = len(image)
    for i in range(n):
        u = i
        for _ in range(n):
            u = image[u]
        if image[u] != u:
            return False
    return True


def all_branchings(G: NodeGraph, guard: int | None = None) -> list:
    return [Branching(G, im) for im in _all_maps(G, guard) if _eventually_fixed(im)]


def count_all_branchings(G: NodeGraph, single_sink: bool = False,
                         guard: int | None = None) -> int:
    """Number of branchings; with single_sink, the rooted spanning arborescences."""
    total = 0
    for im in _all_maps(G, guard):
        if not _eventually_fixed(im):
            continue
        if single_sink and sum(1 for i, t in enumerate(im) if t == i) != 1:
            continue
        total += 1
    return total


def greedy_path_count(n: int) -> int:
    """a(0)=0, a(1)=1, a(2)=2, a(n+3) = 2a(n+2) + a(n+1) - a(n)."""
    a = [0, 1, 2]
    while len(a) <= n:
        a.append(2 * a[-1] + a[-2] - a[-3])
    return a[n]


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def bipartite_count(m: int, n: int) -> int:
    return m * n * (2 ** (m - 1) + 2 ** (n - 1))


def recover_branching(G: NodeGraph, rdeg: Sequence[int]) -> Branching:
    """Rebuild a greedy branching from its reduced in-degree sequence.

    A node may be marked when its still undirected neighbors, plus itself if
    it is undirected, account for its in-degree exactly. Marking choices are
    explored depth first and the result is checked against ``rdeg``."""
    target = tuple(int(x) for x in rdeg)
    if len(target) != G.n:
        raise ValueError("reduced in-degree vector has the wrong length")
    if sum(target) != 0:
        raise NotRealizable("reduced in-degrees must sum to zero")

    def fits(u, marked, directed):
        fresh = sum(1 for v in G.adj[u] if v not in marked and v not in directed)
        return target[u] == fresh - (1 if u in directed else 0)

    def rec(marked, directed, image, order):
        if len(directed) == G.n:
            im = tuple(image)
            br = Branching(G, im)
            return (br, order) if reduced_indegree(br) == target else None
        cands = [u for u in range(G.n) if u not in marked and fits(u, marked, directed)]
        if not cands:
            cands = [u for u in range(G.n) if u not in directed]
        for u in cands:
            new_image = list(image)
            new_directed = set(directed)
            if u not in new_directed:
                new_image[u] = u
                new_directed.add(u)
            for v in G.adj[u]:
                if v not in marked and v not in directed:
                    new_image[v] = u
                    new_directed.add(v)
            res = rec(marked | {u}, new_directed, new_image, order + [u])
            if res is not None:
                return res
        return None

    res = rec(frozenset(), set(), [None] * G.n, [])
    if res is None:
        raise NotRealizable(f"no greedy branching has reduced in-degrees {list(target)}")
    br, order = res
    rest = [u for u in range(G.n) if u not in order]
    ranking = order + rest
    c = {G.nodes[u]: len(ranking) - k for k, u in enumerate(ranking)}
    if greedy_branching(G, c) != br:
        raise AssertionError("recovered branching is not greedy for its marking order")
    return br


def polymatroid_f(G: NodeGraph, S: Iterable[int]) -> int:
    """|S| plus the number of nodes outside S adjacent to S (S as node indices)."""
    S = set(S)
    outside = set()
    for v in S:
        outside |= G.adj[v] - S
    return len(S) + len(outside)


def _subsets(n: int):
    for mask in range(1 << n):
        yield frozenset(i for i in range(n) if mask >> i & 1)


def check_polymatroid(G: NodeGraph) -> bool:
    if G.n > CHAMBER_THRESHOLD:
        raise EnumerationGuard("polymatroid axioms are checked on at most 8 nodes")
    f = {S: polymatroid_f(G, S) for S in _subsets(G.n)}
    if f[frozenset()] != 0:
        return False
    for A in f:
        for B in f:
            if A <= B and f[A] > f[B]:
                return False
            if f[A | B] + f[A & B] > f[A] + f[B]:
                return False
    return True


def base_polytope_check(G: NodeGraph) -> bool:
    """In-degree vectors of greedy branchings are vertices of the base polytope of f."""
    if G.n > CHAMBER_THRESHOLD:
        raise EnumerationGuard("base polytope check is limited to 8 nodes")
    f = {S: polymatroid_f(G, S) for S in _subsets(G.n)}
    full = frozenset(range(G.n))
    if f[full] != G.n:
        return False
    for br in enumerate_greedy_branchings(G):
        x = [r + 1 for r in reduced_indegree(br)]
        if any(v < 0 for v in x) or sum(x) != f[full]:
            return False
        for S, bound in f.items():
            if sum(x[i] for i in S) > bound:
                return False
        # a vertex of B_f is tight on a maximal chain; the greedy order provides one
        if not _tight_chain(x, f, G.n):
            return False
    return True


def _tight_chain(x, f, n) -> bool:
    chain = frozenset()
    while len(chain) < n:
        for i in range(n):
            if i in chain:
                continue
            S = chain | {i}
            if sum(x[j] for j in S) == f[S]:
                chain = S
                break
        else:
            return False
    return True


def graphical_points(G: NodeGraph) -> list:
    return sorted({tuple(Fraction(r) for r in reduced_indegree(br))
                   for br in enumerate_greedy_branchings(G)})


def hypergraph_points(G: NodeGraph, guard: int | None = None) -> list:
    """Vertices of the sum of simplices on N(v) with v, shifted by minus the all-ones vector."""
    summands = []
    for v in range(G.n):
        summands.append([tuple(Fraction(int(k == u)) for k in range(G.n))
                         for u in [v, *sorted(G.adj[v])]])
    fan = MinkowskiFan(summands, G.n)
    sels, _, _ = fan.enumerate(guard)
    return sorted({tuple(x - 1 for x in fan.point(s)) for s in sels})


def project_to_polytope(G: NodeGraph, P: Polytope) -> bool:
    """Projected greedy in-degree vectors span the greatest-improvement neighbotope of P.

    Nodes of G must be the vertex indices of P."""
    labelled = {tuple(sorted((G.nodes[i], G.nodes[j]))) for i, j in G.edges}
    if sorted(G.nodes) != list(range(P.n)) or labelled != set(P.edges):
        raise GraphMismatch("graph is not the graph of the polytope")
    images = set()
    for br in enumerate_greedy_branchings(G):
        pt = [Fraction(0)] * P.dim
        for i, k in enumerate(reduced_indegree(br)):
            vertex = P.vertices[G.nodes[i]]
            for j in range(P.dim):
                pt[j] += k * vertex[j]
        images.add(tuple(pt))
    pts = sorted(images)
    hull = sorted(p for p in pts if hull_vertex_test(p, pts))
    return hull == sorted(neighbotope(P, GI).points)


def normalized_graphical_neighbotope(G: NodeGraph, weights: Mapping | None = None,
                                     guard: int | None = None) -> ConstructedPolytope:
    """Sum over nodes v of conv{(e_u - e_v)/N(uv)} with u a neighbor of v or v itself.

    ``weights`` maps node pairs (in either order) to positive rationals; missing
    pairs default to 1."""
    table = {}
    for key, val in (weights or {}).items():
        u, v = key
        val = to_fraction(val)
        if val <= 0:
            raise NonPositiveWeight(f"weight {fmt(val)} on {u!r}-{v!r}")
        table[frozenset((G.index(u), G.index(v)))] = val
    summands, targets = [], []
    for v in range(G.n):
        opts = [v, *sorted(G.adj[v])]
        pts = []
        for u in opts:
            scale = table.get(frozenset((u, v)), Fraction(1)) if u != v else Fraction(1)
            pts.append(tuple(Fraction(int(k == u) - int(k == v)) / scale for k in range(G.n)))
        summands.append(pts)
        targets.append(opts)
    fan = MinkowskiFan(summands, G.n)
    sels, wits, edges = fan.enumerate(guard)
    labels = tuple(Branching(G, tuple(targets[v][i] for v, i in enumerate(s))) for s in sels)
    return ConstructedPolytope(G.n, tuple(fan.point(s) for s in sels), labels, tuple(edges),
                               tuple(wits), "graphical-neighbotope")


def max_energy_bruteforce(G: NodeGraph, c: Potentials, guard: int | None = None) -> Fraction:
    return max(potential_energy(G, c, br) for br in all_branchings(G, guard))
