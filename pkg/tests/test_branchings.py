from fractions import Fraction
from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from pivotal.battery import _networkx_max_energy
from pivotal.branchings import (
    Branching,
    GraphMismatch,
    InvalidBranching,
    NodeGraph,
    NonGenericPotentials,
    NonPositiveWeight,
    NotRealizable,
    all_branchings,
    argmax_branching,
    base_polytope_check,
    bipartite_count,
    check_polymatroid,
    complete_bipartite,
    complete_graph,
    count_all_branchings,
    cycle_graph,
    enumerate_greedy_branchings,
    fibonacci,
    graphical_points,
    greedy_branching,
    greedy_path_count,
    hypergraph_points,
    max_energy_bruteforce,
    normalized_graphical_neighbotope,
    path_graph,
    polymatroid_f,
    potential_energy,
    project_to_polytope,
    recover_branching,
    reduced_indegree,
    star_graph,
)
from pivotal.polytope import cross_polytope, cube, simplex


def test_greedy_examples():
    G = NodeGraph.from_edges(["v"], [])
    assert greedy_branching(G, {"v": 1}).as_map() == {"v": "v"}
    P3 = path_graph(3)
    br = greedy_branching(P3, {1: 1, 2: 3, 3: 2})
    assert br.as_map() == {1: 2, 2: 2, 3: 2}
    assert potential_energy(P3, {1: 1, 2: 3, 3: 2}, br) == 3
    with pytest.raises(NonGenericPotentials):
        greedy_branching(P3, {1: 1, 2: 1, 3: 2})


def test_bipartite_branching_is_fixed_by_a_b_and_s():
    G = complete_bipartite(2, 2)
    c = {"a1": 4, "a2": 1, "b1": 3, "b2": 2}
    br = greedy_branching(G, c)
    # a = a1 is the global maximum; b1 is the best node on the other side
    assert br["a1"] == "a1" and br["b1"] == "a1" and br["b2"] == "a1"
    assert br["a2"] == "b1"


def test_energy_and_indegree_of_identity():
    G = cycle_graph(4)
    ident = Branching(G, tuple(range(4)))
    assert potential_energy(G, {v: v for v in G.nodes}, ident) == 0
    assert reduced_indegree(ident) == (0, 0, 0, 0)


def test_counts():
    assert len(enumerate_greedy_branchings(path_graph(3))) == 5
    assert len(enumerate_greedy_branchings(path_graph(2))) == 2
    assert count_all_branchings(path_graph(3)) == 8 == fibonacci(6)
    assert count_all_branchings(path_graph(4)) == 21 == fibonacci(8)
    assert count_all_branchings(cycle_graph(4), single_sink=True) == 16


@pytest.mark.parametrize("m,n", [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4)])
def test_bipartite_counts(m, n):
    G = complete_bipartite(m, n)
    orders = enumerate_greedy_branchings(G, method="orders")
    chambers = enumerate_greedy_branchings(G, method="chambers")
    assert orders == chambers
    assert len(orders) == len(hypergraph_points(G))
    # a choice with S equal to the whole class A no longer depends on b
    assert len(orders) == bipartite_count(m, n) - 2 * m * n + m + n


def test_path_counts_follow_the_recurrences():
    for n in range(1, 8):
        assert count_all_branchings(path_graph(n)) == fibonacci(2 * n)
        assert len(enumerate_greedy_branchings(path_graph(n))) == greedy_path_count(n)
    a = [0, 1, 2]
    while len(a) < 9:
        a.append(2 * a[-1] + a[-2] - a[-3])
    assert [greedy_path_count(n) for n in range(1, 8)] == a[1:8]


def test_recovery_examples():
    G = NodeGraph.from_edges([0], [])
    assert recover_branching(G, (0,)).image == (0,)
    S = star_graph(3)
    br = recover_branching(S, (3, -1, -1, -1))
    assert br.image == (0, 0, 0, 0)
    with pytest.raises(NotRealizable):
        recover_branching(path_graph(3), (2, 2, -1))


def test_recovery_on_the_path_with_a_middle_valley():
    G = path_graph(4)
    c = {1: 1, 2: 4, 3: 3, 4: 2}
    br = greedy_branching(G, c)
    assert recover_branching(G, reduced_indegree(br)) == br


def test_polymatroid():
    G = complete_bipartite(2, 2)
    assert polymatroid_f(G, {0}) == 3
    assert check_polymatroid(G) and check_polymatroid(path_graph(5))
    assert base_polytope_check(G) and base_polytope_check(cycle_graph(5))


def test_greedy_points_are_the_polymatroid_base_vertices():
    for G in (complete_bipartite(2, 3), cycle_graph(5), path_graph(5), complete_graph(4)):
        base = set()
        for order in permutations(range(G.n)):
            prefix, x = [], [0] * G.n
            for u in order:
                before = polymatroid_f(G, prefix)
                prefix.append(u)
                x[u] = polymatroid_f(G, prefix) - before
            base.add(tuple(Fraction(v - 1) for v in x))
        assert set(graphical_points(G)) == base


def test_projection_to_polytopes():
    for P, count in ((simplex(3), 3), (cube(2), 8), (cross_polytope(2), 8)):
        G = NodeGraph.of_polytope(P)
        assert project_to_polytope(G, P)
        from pivotal.pivot_polytopes import neighbotope
        from pivotal.rules import GI
        assert neighbotope(P, GI).n == count
    with pytest.raises(GraphMismatch):
        project_to_polytope(path_graph(4), cube(2))


def test_normalized_graphical_neighbotope():
    G = path_graph(3)
    plain = normalized_graphical_neighbotope(G)
    assert sorted(plain.points) == graphical_points(G)
    K2 = path_graph(2)
    half = normalized_graphical_neighbotope(K2, {(1, 2): 2})
    assert sorted(half.points) == [(Fraction(-1, 2), Fraction(1, 2)), (Fraction(1, 2), Fraction(-1, 2))]
    other = normalized_graphical_neighbotope(G, {(1, 2): 1, (2, 3): 2})
    assert other.n == plain.n and sorted(other.points) != sorted(plain.points)
    with pytest.raises(NonPositiveWeight):
        normalized_graphical_neighbotope(K2, {(1, 2): 0})


def test_invalid_branchings():
    G = path_graph(3)
    with pytest.raises(InvalidBranching):
        Branching(G, (2, 1, 2))
    with pytest.raises(InvalidBranching):
        Branching(G, (1, 0, 2))


def test_forced_choice_on_bipartite_classes():
    G = complete_bipartite(3, 3)
    for br in enumerate_greedy_branchings(G):
        for side in ("a", "b"):
            nodes = [v for v in G.nodes if v.startswith(side)]
            for u in nodes:
                for v in nodes:
                    if br[u] not in (u, v) and br[v] not in (u, v):
                        assert br[u] == br[v]


graphs = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1]))))


@settings(max_examples=60)
@given(graphs, st.randoms(use_true_random=False))
def test_greedy_is_an_energy_maximum(case, rnd):
    n, edges = case
    G = NodeGraph.from_edges(range(n), sorted(edges))
    vals = list(range(1, n + 1))
    rnd.shuffle(vals)
    c = dict(zip(G.nodes, vals))
    br = greedy_branching(G, c)
    assert br == argmax_branching(G, c)
    energy = potential_energy(G, c, br)
    assert energy == _networkx_max_energy(G, vals)
    if n <= 5:
        assert energy == max_energy_bruteforce(G, c)
    assert recover_branching(G, reduced_indegree(br)) == br


@settings(max_examples=30)
@given(graphs)
def test_hypergraph_identity(case):
    n, edges = case
    G = NodeGraph.from_edges(range(n), sorted(edges))
    assert graphical_points(G) == hypergraph_points(G)


def test_networkx_oracle_counts_branchings_like_us():
    for G in (path_graph(4), cycle_graph(4)):
        D = nx.DiGraph()
        D.add_nodes_from(range(G.n))
        for i, j in G.edges:
            D.add_edge(i, j)
            D.add_edge(j, i)
        # forests of in-arborescences on the symmetric digraph are exactly the branchings
        count = 0
        for br in all_branchings(G):
            count += 1
        assert count == count_all_branchings(G)
