from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings

from npsupport import verify
from npsupport.generators import gen_dual_lb, gen_primal_lb
from npsupport.model import (
    Graph,
    GraphSystem,
    IntersectionSystem,
    Provenance,
    SubgraphFamily,
    Support,
    complete_graph,
    cycle_graph,
    grid_graph,
    path_graph,
)
from npsupport.primal import star_example

from helpers import brute_connected, brute_treewidth, random_graph, small_graphs


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


# --- support oracles ---------------------------------------------------------------

def test_primal_oracle_accepts_clique_on_star_leaves():
    sys, _ = star_example(4)
    sup = Support.from_label_edges(range(1, 5), itertools.combinations(range(1, 5), 2))
    assert verify.primal_oracle(sys, sup)
    assert verify.check_support("primal", sys, sup)


def test_primal_oracle_names_member_missing_edge():
    sys, _ = star_example(4)
    edges = set(itertools.combinations(range(1, 5), 2)) - {(1, 2)}
    rep = verify.primal_oracle(sys, Support.from_label_edges(range(1, 5), edges))
    assert not rep
    assert sys.family_h[rep.witness] & sys.coloring.blue() == {1, 2}
    assert len(rep.components) == 2


def test_empty_hyperedge_set_is_vacuous():
    g = path_graph(3)
    sys = GraphSystem(g, SubgraphFamily.of([]))
    sup = Support.from_label_edges(range(3), [])
    assert verify.primal_oracle(sys, sup)


def test_label_mismatch_raises():
    sys, _ = star_example(3)
    with pytest.raises(ValueError):
        verify.primal_oracle(sys, Support.from_label_edges([1, 2], [(1, 2)]))


def test_dual_and_intersection_oracles():
    g = path_graph(3)
    fam = SubgraphFamily.of([{0, 1}, {1, 2}, {2}])
    sys = GraphSystem(g, fam)
    assert not verify.dual_oracle(sys, Support.from_label_edges(range(3), [(0, 2)]))
    assert verify.dual_oracle(sys, Support.from_label_edges(range(3), [(0, 1), (1, 2)]))
    isys = IntersectionSystem(g, fam, SubgraphFamily.of([{0}, {2}], "K"))
    assert verify.intersection_oracle(isys, Support.from_label_edges(range(3), [(1, 2)]))
    assert not verify.intersection_oracle(isys, Support.from_label_edges(range(3), [(0, 1)]))


@settings(max_examples=60, deadline=None)
@given(small_graphs(6))
def test_dual_oracle_matches_brute_force(g):
    members = [frozenset(c) for c in ([v, w] for v, w in g.edges)][:5] or [frozenset({0})]
    sys = GraphSystem(g, SubgraphFamily.of(members))
    k = len(members)
    edges = {(i, i + 1) for i in range(0, k - 1, 2)}
    sup = Support.from_label_edges(range(k), edges)
    expect = all(
        brute_connected(edges, [i for i, m in enumerate(members) if v in m]) for v in g.vertices
    )
    assert bool(verify.dual_oracle(sys, sup)) == expect


# --- exact treewidth -----------------------------------------------------------------

def test_exact_treewidth_known_values():
    tree = Graph.from_edges(6, [(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)])
    assert verify.exact_treewidth(tree) == 1
    assert verify.exact_treewidth(complete_graph(5)) == 4
    for n in range(3, 9):
        assert verify.exact_treewidth(cycle_graph(n)) == 2
    for n in range(2, 5):
        assert verify.exact_treewidth(grid_graph(n, n)) == n
    assert verify.exact_treewidth(grid_graph(1, 1)) == 0


@settings(max_examples=80, deadline=None)
@given(small_graphs(7))
def test_exact_treewidth_matches_permutation_search(g):
    assert verify.exact_treewidth(g) == brute_treewidth(g)


def test_treewidth_at_most_is_consistent():
    for seed in range(30):
        g = random_graph(8, 0.45, seed)
        tw = verify.exact_treewidth(g)
        assert verify.treewidth_at_most(g, tw)
        assert tw == 0 or not verify.treewidth_at_most(g, tw - 1)


def test_exact_treewidth_refuses_large_graphs():
    with pytest.raises(ValueError):
        verify.exact_treewidth(path_graph(30), limit=20)


# --- outerplanarity --------------------------------------------------------------------

def test_outerplanar_small_cases():
    for n in range(3, 10):
        assert verify.is_outerplanar(cycle_graph(n))
    assert not verify.is_outerplanar(complete_graph(4))
    assert not verify.is_outerplanar(complete_bipartite(2, 3))
    assert verify.is_outerplanar(complete_bipartite(1, 5))


def test_embedding_order_is_noncrossing():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 2), (0, 3), (3, 5)])
    order = verify.outerplanar_embedding_order(g)
    assert sorted(order) == list(range(6))
    assert verify.noncrossing_order(order, g.edges)
    assert verify.outerplanar_embedding_order(complete_graph(4)) is None


def test_noncrossing_order_detects_crossing():
    assert not verify.noncrossing_order([0, 1, 2, 3], {(0, 2), (1, 3)})
    assert verify.noncrossing_order([0, 1, 2, 3], {(0, 2), (0, 3)})


@settings(max_examples=120, deadline=None)
@given(small_graphs(8))
def test_outerplanar_agrees_with_minor_search(g):
    assert verify.is_outerplanar(g) == verify.is_outerplanar_by_minors(g)


@settings(max_examples=60, deadline=None)
@given(small_graphs(8))
def test_outerplanar_implies_treewidth_two(g):
    if verify.is_outerplanar(g):
        assert verify.exact_treewidth(g) <= 2


# --- forced structure ----------------------------------------------------------------

def test_forced_edges_primal_m4_is_four_cycle():
    lb = gen_primal_lb(4)
    edges = verify.forced_edges("primal", lb)
    assert len(edges) == 4
    g = verify.grid_labels_graph(edges)
    assert all(g.degree(v) == 2 for v in g.vertices)


def test_forced_edges_dual_m4_is_grid():
    lb = gen_dual_lb(4)
    edges = verify.forced_edges("dual", lb)
    assert verify.exact_treewidth(verify.grid_labels_graph(edges)) == 2


def test_forced_edges_boundary_and_kind_check():
    assert verify.forced_edges("primal", gen_primal_lb(2)) == set()
    assert verify.forced_edges("dual", gen_dual_lb(2)) == set()
    with pytest.raises(ValueError):
        verify.forced_edges("dual", gen_primal_lb(4))


def test_check_support_on_cycle_system_defaults():
    from npsupport.cyclesupport import CycleSystem

    cs = CycleSystem.of(6, [{0, 1, 2}, {2, 3, 4}, {4, 5, 0}])
    tri = Support.from_label_edges(range(3), [(0, 1), (1, 2), (0, 2)], Provenance("x"))
    assert verify.check_support("outerplanar-dual", cs, tri)
    assert verify.check_support("outerplanar-intersection", cs, tri)
    with pytest.raises(ValueError):
        verify.check_support("nonsense", cs, tri)
