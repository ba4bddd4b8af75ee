from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npsupport import kernels
from npsupport import _pykernels
from npsupport.model import (
    Coloring,
    DisconnectedMemberError,
    Graph,
    GraphSystem,
    SubgraphFamily,
    Support,
    attach_pendants,
    complete_graph,
    containment_maximal,
    find_piercing_pair,
    induced_connected,
    is_non_piercing,
    path_graph,
    star_graph,
)
from npsupport import verify
from npsupport.primal import star_example

from helpers import brute_connected, small_graphs


def test_induced_connected_basics():
    p = path_graph(3)
    assert not induced_connected(p, {0, 2})
    assert induced_connected(p, {0, 1, 2})
    k4 = complete_graph(4)
    for r in range(1, 5):
        for s in itertools.combinations(range(4), r):
            assert induced_connected(k4, s)


def test_induced_connected_rejects_unknown_vertex():
    with pytest.raises(ValueError):
        induced_connected(path_graph(3), {5})


@settings(max_examples=100, deadline=None)
@given(small_graphs(8), st.data())
def test_kernels_agree_with_each_other_and_brute_force(g, data):
    s = frozenset(data.draw(st.sets(st.integers(0, g.vertex_count - 1), min_size=1)))
    expect = brute_connected(set(g.edges), s)
    assert _pykernels.subset_connected(g.adjacency, s) == expect
    assert kernels.subset_connected(g.adjacency, s) == expect


def test_star_pair_family_pierces_from_four_leaves():
    def fam(n):
        return SubgraphFamily.of([{0, i, j} for i in range(1, n + 1) for j in range(i + 1, n + 1)])

    assert is_non_piercing(star_graph(3), fam(3))
    # {0,1,2} minus {0,3,4} leaves the two leaves without the centre
    pair = find_piercing_pair(star_graph(4), fam(4))
    f4 = fam(4)
    assert pair is not None and not (f4[pair[0]] & f4[pair[1]]) - {0}


def test_piercing_pair_witness():
    fam = SubgraphFamily.of([{0, 1, 2}, {1}])
    assert find_piercing_pair(path_graph(3), fam) == (0, 1)
    assert is_non_piercing(path_graph(3), SubgraphFamily.of([{0, 1, 2}]))


def test_disconnected_member_rejected():
    with pytest.raises(DisconnectedMemberError):
        GraphSystem(path_graph(3), SubgraphFamily.of([{0, 2}]))


def test_empty_member_rejected():
    with pytest.raises(ValueError):
        SubgraphFamily.of([set()])


def test_containment_maximal_examples():
    red = containment_maximal(SubgraphFamily.of([{0, 1}, {0, 1, 2}, {3}]))
    assert red.kept == (1, 2)
    assert red.successor == {0: 1}
    red = containment_maximal(SubgraphFamily.of([{0}, {1}, {2}]))
    assert red.kept == (0, 1, 2) and not red.successor
    red = containment_maximal(SubgraphFamily.of([{0, 1}, {0, 1}]))
    assert len(red.kept) == 1 and len(red.successor) == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sets(st.integers(0, 6), min_size=1, max_size=4), min_size=1, max_size=8))
def test_containment_successor_contains_member(members):
    fam = SubgraphFamily.of(members)
    red = containment_maximal(fam)
    assert set(red.kept) | set(red.successor) == set(range(len(members)))
    for c, p in red.successor.items():
        assert p in red.kept and fam[c] <= fam[p]
    for a, b in itertools.permutations(red.kept, 2):
        assert not fam[a] <= fam[b]


def test_attach_pendants():
    tri = Support.from_label_edges([0, 1, 2], [(0, 1), (1, 2), (0, 2)])
    assert attach_pendants(tri, {}) == tri
    out = attach_pendants(tri, {3: 1})
    assert out.labels == (0, 1, 2, 3)
    assert out.as_graph().degree(3) == 1


def test_pendants_restore_all_labels_on_star():
    sys, td = star_example(4)
    from npsupport.dual import dual_support

    sup = dual_support(sys, td)
    assert set(sup.labels) == set(range(len(sys.family_h)))
    assert verify.dual_oracle(sys, sup)


def test_support_rejects_bad_edges():
    with pytest.raises(ValueError):
        Support((0, 1), frozenset({(0, 0)}))
    with pytest.raises(ValueError):
        Support((0, 0), frozenset())


def test_coloring_codes_round_trip():
    c = Coloring.from_blue(4, [1, 3])
    assert c.codes() == ["r", "b", "r", "b"]
    assert Coloring.from_codes(c.codes()) == c
    assert c.blue({0, 1, 2}) == {1}
    assert c.red() == {0, 2}


def test_graph_rejects_self_loop():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(1, 1)])
