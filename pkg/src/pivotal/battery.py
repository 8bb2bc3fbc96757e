"""Acceptance battery: each criterion yields rows (claim, expected, computed, pass)."""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product as cartesian
from math import comb, factorial

from .branchings import (
    NodeGraph,
    all_branchings,
    bipartite_count,
    complete_bipartite,
    count_all_branchings,
    enumerate_greedy_branchings,
    fibonacci,
    greedy_branching,
    greedy_path_count,
    path_graph,
    potential_energy,
    recover_branching,
    reduced_indegree,
)
from .exact import hull_vertex_test
from .fans import EnumerationGuard
from .paths_sweeps import (
    ed_points,
    is_belt,
    is_weak_summand,
    monotone_path_polytope,
    normally_equivalent,
    sweep_polytope,
)
from .pivot_polytopes import (
    brute_force_coherent,
    count_all_arborescences,
    ed_directions,
    enumerate_all_arborescences,
    enumerate_coherent,
    neighbotope,
    neighbotope_bound,
    pivot_polytope,
    ub_theorem_margin,
)
from .polytope import (
    NonGenericObjective,
    compute_edges,
    cross_polytope,
    cube,
    is_simple,
    make_polytope,
    orient,
    prism,
    product,
    simplex,
    zonotope,
)
from .roots import (
    build_root_system,
    classify_incomparable,
    dfs_verify_comp_roots,
    incomparable_pairs,
    is_incomparable,
    parse_type,
    type_a_pair_count,
    verify_np_roots,
    verify_witness,
    witness,
)
from .rules import GI, L1, LINF, MS


@dataclass(frozen=True)
class Row:
    criterion: int
    claim: str
    expected: str
    computed: str
    passed: bool

    def csv_fields(self) -> list:
        return [f"[{self.criterion}] {self.claim}", self.expected, self.computed,
                "pass" if self.passed else "FAIL"]


@dataclass(frozen=True)
class Options:
    max_dim: int | None = None
    long: bool = False
    seed: int = 2024


def _row(k: int, claim: str, expected, computed) -> Row:
    return Row(k, claim, str(expected), str(computed), expected == computed)


def _fits(opts: Options, dim: int) -> bool:
    return opts.max_dim is None or dim <= opts.max_dim


def _shuffled_objective(d: int, rng: random.Random) -> tuple:
    c = list(range(1, d + 1))
    rng.shuffle(c)
    return tuple(c)


def hexagon():
    return zonotope([(1, 0), (0, 1), (1, 1)], name="hexagon")


# ---------------------------------------------------------------- 1


def criterion_1(opts: Options) -> list:
    rng = random.Random(opts.seed)
    rows = []
    for d in range(3, 7):
        if not _fits(opts, d - 1):
            continue
        t = time.perf_counter()
        ori = orient(simplex(d), _shuffled_objective(d, rng))
        found = [A for A, _ in enumerate_coherent(ori, GI)]
        elapsed = time.perf_counter() - t
        rows.append(_row(1, f"simplex d={d} GI coherent count ({elapsed:.2f}s)", 2 ** (d - 2), len(found)))
        rows.append(_row(1, f"simplex d={d} total arborescences", factorial(d - 1),
                         count_all_arborescences(ori)))
        oracle = brute_force_coherent(ori, GI)
        rows.append(_row(1, f"simplex d={d} GI coherent set equals LP-filtered set", True,
                         sorted(A.parent for A in found) == sorted(A.parent for A in oracle)))
    return rows


# ---------------------------------------------------------------- 2


def criterion_2(opts: Options) -> list:
    rows = []
    for d, c in ((2, (1, 2)), (3, (1, 2, 4)), (4, (2, 7, 1, 5))):
        if not _fits(opts, d):
            continue
        Pi = pivot_polytope(orient(cube(d), c), GI)
        target = {tuple(Fraction(x) for x in p) for p in permutations([2 ** k for k in range(d)])}
        rows.append(_row(2, f"cube d={d} GI pivot polytope vertex count", factorial(d), Pi.n))
        rows.append(_row(2, f"cube d={d} GI vertices are the permutations of (1,..,{2 ** (d - 1)})",
                         True, set(Pi.points) == target))
    return rows


# ---------------------------------------------------------------- 3


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def is_noncrossing(ori, A) -> bool:
    """Relabel vertices 1..d by objective value and look for i < j < A(i) < A(j)."""
    order = sorted(range(ori.polytope.n), key=ori.level)
    pos = {v: k for k, v in enumerate(order)}
    img = [pos[A[v]] for v in order]
    d = len(img)
    return not any(j < img[i] < img[j] for i in range(d) for j in range(i + 1, d))


def criterion_3(opts: Options) -> list:
    rng = random.Random(opts.seed + 3)
    rows = []
    for d in range(3, 8):
        if not _fits(opts, d - 1):
            continue
        ori = orient(simplex(d), _shuffled_objective(d, rng))
        found = {A.parent for A, _ in enumerate_coherent(ori, MS)}
        rows.append(_row(3, f"simplex d={d} MS coherent count", catalan(d - 1), len(found)))
        oracle = {A.parent for A in brute_force_coherent(ori, MS)}
        noncrossing = {A.parent for A in enumerate_all_arborescences(ori) if is_noncrossing(ori, A)}
        rows.append(_row(3, f"simplex d={d} MS coherent iff non-crossing", True,
                         found == oracle == noncrossing))
    return rows


# ---------------------------------------------------------------- 4


def criterion_4(opts: Options) -> list:
    rows = []
    P = prism(simplex(3))
    for c in ((1, 2, 3, 5), (1, 2, 3, Fraction(1, 2)), (2, 3, 7, -4)):
        Pi = pivot_polytope(orient(P, c), MS)
        rows.append(_row(4, f"triangular prism MS pivot polytope, c={','.join(map(str, c))}", 6, Pi.n))
    return rows


# ---------------------------------------------------------------- 5


def criterion_5(opts: Options) -> list:
    rows = []
    for d in (2, 3):
        if not _fits(opts, d):
            continue
        N = neighbotope(cube(d), GI)
        target = set()
        for p in permutations([2 ** k for k in range(d)]):
            for s in cartesian((1, -1), repeat=d):
                target.add(tuple(Fraction(a * b) for a, b in zip(p, s)))
        rows.append(_row(5, f"cube d={d} GI neighbotope vertex count", factorial(d) * 2 ** d, N.n))
        rows.append(_row(5, f"cube d={d} GI neighbotope vertices are signed permutations", True,
                         set(N.points) == target))
        X = neighbotope(cross_polytope(d), GI)
        rows.append(_row(5, f"cross polytope d={d} GI neighbotope vertex count", 4 * d * (d - 1), X.n))
    return rows


# ---------------------------------------------------------------- 6


def random_instance(rng: random.Random, max_directed: int = 10):
    """Random full-dimensional polytope in dimension 2 or 3 with a generic objective."""
    while True:
        dim = rng.choice((2, 3))
        pts = {tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(rng.randint(dim + 1, 7))}
        pts = [tuple(Fraction(x) for x in p) for p in pts]
        verts = [p for p in pts if hull_vertex_test(p, pts)]
        if len(verts) < dim + 1:
            continue
        P = make_polytope(verts, compute_edges(verts), "random")
        if P.affine_dim != dim:
            continue
        c = tuple(rng.randint(-5, 5) for _ in range(dim))
        try:
            ori = orient(P, c)
        except NonGenericObjective:
            continue
        if 1 <= len(ori.directed_edges) <= max_directed:
            return ori


def criterion_6(opts: Options) -> list:
    rng = random.Random(opts.seed + 6)
    rows = []
    instances = [random_instance(rng) for _ in range(24)]
    for N in (GI, L1, LINF, MS):
        agree = 0
        for ori in instances:
            sw = {A.parent for A, _ in enumerate_coherent(ori, N, method="sweeps")}
            fan = {A.parent for A, _ in enumerate_coherent(ori, N, method="fan")}
            bf = {A.parent for A in brute_force_coherent(ori, N)}
            agree += sw == bf == fan
        rows.append(_row(6, f"{N.label()}: sweep enumeration equals LP-filtered enumeration",
                         f"{len(instances)}/{len(instances)}", f"{agree}/{len(instances)}"))
    return rows


# ---------------------------------------------------------------- 7


def _instances_7() -> list:
    return [
        ("simplex(3)", simplex(3), (1, 2, 3)),
        ("simplex(4)", simplex(4), (1, 2, 3, 4)),
        ("cube(2)", cube(2), (1, 2)),
        ("cube(3)", cube(3), (1, 2, 4)),
        ("hexagon", hexagon(), (1, 3)),
        ("prism", prism(simplex(3)), (1, 2, 3, 5)),
        ("cross(3)", cross_polytope(3), (1, 2, 4)),
    ]


def criterion_7(opts: Options) -> list:
    rows = []
    insts = _instances_7()
    for name, P, c in insts:
        if name == "cross(3)":
            continue
        ori = orient(P, c)
        Mon = monotone_path_polytope(ori)
        Pi = pivot_polytope(ori, MS)
        rows.append(_row(7, f"{name}: monotone path polytope is a weak summand of the MS pivot polytope",
                         True, is_weak_summand(Mon, Pi)))
        if name in ("cube(2)", "cube(3)", "hexagon"):
            rows.append(_row(7, f"{name}: monotone path polytope normally equivalent to MS pivot polytope",
                             True, normally_equivalent(Mon, Pi)))
    for name, P, c in insts:
        ori = orient(P, c)
        for N in (GI, L1, LINF, MS):
            Pi = pivot_polytope(ori, N)
            SP = sweep_polytope(ed_directions(ori, N))
            rows.append(_row(7, f"{name} {N.label()}: pivot polytope is a weak summand of the sweep polytope",
                             True, is_weak_summand(Pi, SP)))
        if name in ("simplex(4)", "prism", "cross(3)"):
            continue
        for N in (GI, L1, LINF):
            NP = neighbotope(P, N)
            SP = sweep_polytope(sorted(_undirected_directions(P, N)))
            rows.append(_row(7, f"{name} {N.label()}: neighbotope is a weak summand of the sweep polytope",
                             True, is_weak_summand(NP, SP)))
    Z = zonotope([(1, 1), (-1, 1), (Fraction(1, 2), 1)])
    NP = neighbotope(Z, GI)
    SP = sweep_polytope(ed_points(Z))
    rows.append(_row(7, "planar three-zone zonotope: GI neighbotope vertex count", 12, NP.n))
    rows.append(_row(7, "planar three-zone zonotope: sweep polytope of edge directions vertex count", 14, SP.n))
    rows.append(_row(7, "planar three-zone zonotope: the two are normally equivalent", False,
                     normally_equivalent(NP, SP)))
    Z3 = zonotope([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 4)])
    NP3 = neighbotope(Z3, GI)
    rows.append(_row(7, "zonotope with generators e1,e2,e3,(1,1,4): GI neighbotope is a belt polytope",
                     False, is_belt(NP3)))
    return rows


def _undirected_directions(P, N) -> set:
    from .exact import sub

    return {N.normalized(sub(P.vertices[u], P.vertices[v])) for v in range(P.n) for u in P.neighbors(v)}


# ---------------------------------------------------------------- 8


def _networkx_max_energy(G: NodeGraph, vals) -> int:
    import networkx as nx

    D = nx.DiGraph()
    D.add_nodes_from(range(G.n))
    for v in range(G.n):
        for u in G.adj[v]:
            gain = vals[u] - vals[v]
            if gain > 0:
                D.add_edge(u, v, weight=gain)
    B = nx.maximum_branching(D, attr="weight")
    return sum(d["weight"] for _, _, d in B.edges(data=True))


def small_graphs(max_nodes: int) -> list:
    """Every graph on 1..max_nodes nodes up to isomorphism (networkx atlas, at most 7)."""
    import networkx as nx

    out = []
    for H in nx.graph_atlas_g():
        if 1 <= H.number_of_nodes() <= max_nodes:
            out.append(NodeGraph.from_edges(list(H.nodes()), [tuple(e) for e in H.edges()]))
    return out


def criterion_8(opts: Options) -> list:
    rows = []
    for m in range(2, 5):
        for n in range(m, 5):
            G = complete_bipartite(m, n)
            found = enumerate_greedy_branchings(G)
            rows.append(_row(8, f"K_{m},{n} greedy branching count (closed form)", bipartite_count(m, n),
                             len(found)))
            derived = m * n * (2 ** (m - 1) + 2 ** (n - 1)) - 2 * m * n + m + n
            rows.append(_row(8, f"K_{m},{n} greedy branching count (count by S = A collapse)", derived,
                             len(found)))
    for n in range(1, 8):
        G = path_graph(n)
        rows.append(_row(8, f"path on {n} nodes: all branchings", fibonacci(2 * n), count_all_branchings(G)))
        rows.append(_row(8, f"path on {n} nodes: greedy branchings", greedy_path_count(n),
                         len(enumerate_greedy_branchings(G))))

    rng = random.Random(opts.seed + 8)
    graphs = small_graphs(7)
    agree_nx = agree_bf = checked_bf = total = 0
    for G in graphs:
        trials = []
        for _ in range(5):
            vals = list(range(1, G.n + 1))
            rng.shuffle(vals)
            trials.append(vals)
        best = [potential_energy(G, dict(zip(G.nodes, vals)), greedy_branching(G, dict(zip(G.nodes, vals))))
                for vals in trials]
        total += len(trials)
        agree_nx += sum(b == _networkx_max_energy(G, vals) for b, vals in zip(best, trials))
        if G.n <= 6:
            profiles = {reduced_indegree(br) for br in all_branchings(G)}
            for b, vals in zip(best, trials):
                checked_bf += 1
                agree_bf += b == max(sum(r * x for r, x in zip(p, vals)) for p in profiles)
    rows.append(_row(8, f"greedy energy = maximum branching energy, {len(graphs)} graphs on <= 7 nodes x 5",
                     f"{total}/{total}", f"{agree_nx}/{total}"))
    rows.append(_row(8, "greedy energy = exhaustive maximum over all branchings, graphs on <= 6 nodes x 5",
                     f"{checked_bf}/{checked_bf}", f"{agree_bf}/{checked_bf}"))

    pool = [complete_bipartite(m, n) for m in range(2, 5) for n in range(m, 5)]
    pool += [path_graph(n) for n in range(1, 8)] + small_graphs(6)
    ok = count = 0
    for G in pool:
        for br in enumerate_greedy_branchings(G):
            count += 1
            ok += recover_branching(G, reduced_indegree(br)).image == br.image
    rows.append(_row(8, "recovery from reduced in-degrees round-trips every greedy branching",
                     f"{count}/{count}", f"{ok}/{count}"))
    return rows


# ---------------------------------------------------------------- 9


def criterion_9(opts: Options) -> list:
    rows = []
    for kind, ranks in (("A", range(1, 7)), ("B", range(2, 7)), ("C", range(2, 7)), ("D", range(3, 7))):
        mism = total = wit_ok = wit_total = 0
        for r in ranks:
            R = build_root_system(kind, r + 1 if kind == "A" else r)
            for a, b in combinations(sorted(R.positive), 2):
                total += 1
                inc = is_incomparable(R, a, b)
                mism += classify_incomparable(R, a, b) != inc
                if inc:
                    wit_total += 1
                    try:
                        verify_witness(R, witness(R, a, b))
                        wit_ok += 1
                    except Exception:
                        pass
        rows.append(_row(9, f"type {kind} rank <= 6: case classifier agrees with the cone test",
                         f"{total}/{total}", f"{total - mism}/{total}"))
        rows.append(_row(9, f"type {kind} rank <= 6: witnesses verify for incomparable pairs",
                         f"{wit_total}/{wit_total}", f"{wit_ok}/{wit_total}"))
    expected = {"G2": 2, "F4": 55, "E6": 204, "E7": 546, "E8": 1540}
    for label, count in expected.items():
        if label.startswith("E") and not opts.long:
            continue
        R = parse_type(label)
        rep = dfs_verify_comp_roots(R)
        rows.append(_row(9, f"{label}: incomparable pairs realized by simple systems ({rep['method']})",
                         count, rep["pairs"]))
        rows.append(_row(9, f"{label}: every incomparable pair is realized", True, rep["covered"]))
    for n in range(2, 8):
        R = build_root_system("A", n)
        rows.append(_row(9, f"A_{n - 1}: incomparable pair count 2C(n,4)+C(n,3) with n={n}",
                         type_a_pair_count(n), len(incomparable_pairs(R))))
    return rows


# ---------------------------------------------------------------- 10


def criterion_10(opts: Options) -> list:
    rows = []
    for label in ("A2", "B2", "G2", "A3"):
        R = parse_type(label)
        if not _fits(opts, R.rank):
            continue
        t = time.perf_counter()
        rep = verify_np_roots(R)
        elapsed = time.perf_counter() - t
        rows.append(_row(10, f"{label}: GI neighbotope of the Coxeter zonotope normally equivalent to "
                             f"the sweep polytope of the roots ({elapsed:.1f}s)", True,
                         rep["normally_equivalent"]))
        rows.append(_row(10, f"{label}: neighbotope and sweep polytope vertex counts agree",
                         rep["sweep_vertices"], rep["neighbotope_vertices"]))
    return rows


# ---------------------------------------------------------------- 11


def criterion_11(opts: Options) -> list:
    rows = []
    ub = [
        ("cube(3)", cube(3), (1, 2, 4)),
        ("cube(4)", cube(4), (1, 2, 4, 8)),
        ("prism", prism(simplex(3)), (1, 2, 3, 5)),
        ("prism over simplex(4)", prism(simplex(4)), (1, 2, 3, 4, 9)),
        ("simplex(3) x simplex(3)", product(simplex(3), simplex(3)), (1, 2, 4, 8, 16, 32)),
    ]
    for name, P, c in ub:
        if not _fits(opts, P.affine_dim):
            continue
        ori = orient(P, c)
        for N in (GI, MS):
            count = len(enumerate_coherent(ori, N))
            try:
                _, bound = ub_theorem_margin(ori, N, count)
                rows.append(_row(11, f"{name} {N.label()}: coherent count {count} below h-vector bound {bound}",
                                 True, count < bound))
            except AssertionError as exc:
                rows.append(_row(11, f"{name} {N.label()}: coherent count below h-vector bound", True,
                                 str(exc)))
    nb = [("simplex(3)", simplex(3)), ("simplex(4)", simplex(4)), ("cube(2)", cube(2)),
          ("cube(3)", cube(3)), ("hexagon", hexagon()), ("prism", prism(simplex(3)))]
    for name, P in nb:
        if not is_simple(P) or not _fits(opts, P.affine_dim):
            continue
        N = neighbotope(P, GI)
        bound = neighbotope_bound(P)
        rows.append(_row(11, f"{name}: GI neighbotope vertex count {N.n} at most {bound}", True, N.n <= bound))
    return rows


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 12)}


def _run_one(args) -> list:
    k, opts = args
    try:
        return CRITERIA[k](opts)
    except (EnumerationGuard, ArithmeticError, ValueError, AssertionError) as exc:
        return [Row(k, "criterion raised", "no error", f"{type(exc).__name__}: {exc}", False)]


def run_battery(criteria=None, opts: Options | None = None, workers: int = 1) -> list:
    """Rows of the selected criteria in criterion order, independent of ``workers``."""
    opts = opts or Options()
    ks = sorted(criteria) if criteria else sorted(CRITERIA)
    for k in ks:
        if k not in CRITERIA:
            raise ValueError(f"no acceptance criterion {k}; expected 1..{len(CRITERIA)}")
    jobs = [(k, opts) for k in ks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    return [r for rs in results for r in rs]
