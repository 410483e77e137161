"""Core graph model and transformation tests."""

from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlanroute.errors import UnknownVertexError, ValidationError
from qlanroute.graph import (
    InterQlanGraph,
    LabeledVertex,
    Qlan,
    Role,
    client,
    client_graph,
    complement_graph,
    complement_neighborhood,
    delete_vertex,
    graph_from_json,
    graph_to_json,
    local_complement,
    make_edge,
    neighbors,
    super_node,
    to_dot,
    vertex_from_name,
)

from helpers import (
    all_client_graphs,
    client_graphs,
    plain_graphs,
    random_client_graph,
    random_plain_graph,
)


# -- vertices and construction ------------------------------------------


def test_vertex_names():
    assert client(1, 3).name == "1.3"
    assert client(Qlan.Q2, 1).name == "2.1"
    assert super_node(1).name == "s1"
    assert super_node(2, index=5).name == "s2"  # promoted supers keep their index


def test_vertex_from_name_round_trip():
    for name in ["1.1", "2.14", "s1", "s2"]:
        assert vertex_from_name(name).name == name


@pytest.mark.parametrize("bad", ["", "3.1", "1.", "1.0", "s3", "x", "1,2", "1.-2"])
def test_vertex_from_name_rejects_garbage(bad):
    with pytest.raises(ValidationError):
        vertex_from_name(bad)


def test_client_indices_are_one_based():
    with pytest.raises(ValidationError):
        client(1, 0)


def test_no_self_loops():
    v = client(1, 1)
    with pytest.raises(ValidationError):
        make_edge(v, v)


def test_duplicate_position_rejected():
    a = client(1, 2)
    b = LabeledVertex(Qlan.Q1, 2, Role.SUPER)
    with pytest.raises(ValidationError):
        InterQlanGraph(frozenset({a, b}), frozenset())


def test_two_supers_per_qlan_rejected():
    with pytest.raises(ValidationError):
        InterQlanGraph(frozenset({super_node(1), super_node(1, index=3)}), frozenset())


def test_edge_needs_known_endpoints():
    g = client_graph(1, 1)
    with pytest.raises(UnknownVertexError):
        InterQlanGraph(g.vertices, frozenset({make_edge(client(1, 1), client(2, 2))}))


def test_edges_are_canonical_regardless_of_order():
    a, b = client(1, 1), client(2, 1)
    g1 = InterQlanGraph(frozenset({a, b}), frozenset({(a, b)}))
    g2 = InterQlanGraph(frozenset({a, b}), frozenset({(b, a)}))
    assert g1 == g2


# -- neighbors -----------------------------------------------------------


def test_neighbors_isolated_vertex_is_empty():
    g = client_graph(2, 2)
    assert len(neighbors(g, client(1, 1))) == 0


def test_neighbors_single_edge():
    g = client_graph(1, 1, [(1, 1)])
    assert neighbors(g, client(1, 1)).members == frozenset({client(2, 1)})


def test_neighbors_unknown_vertex():
    g = client_graph(1, 1)
    with pytest.raises(UnknownVertexError, match="1.9"):
        neighbors(g, client(1, 9))


def test_neighbors_matches_independent_edge_scan():
    rng = random.Random(101)
    for _ in range(25):
        g = random_client_graph(rng, 3, 4)
        # oracle: adjacency rebuilt vertex by vertex from the raw edge list
        for v in g.vertices:
            scanned = set()
            for (x, y) in g.edges:
                if x == v:
                    scanned.add(y)
                if y == v:
                    scanned.add(x)
            assert neighbors(g, v).members == frozenset(scanned)


# -- complement neighborhood ----------------------------------------------


def test_complement_neighborhood_complete_bipartite_is_empty():
    g = client_graph(2, 2, [(1, 1), (1, 2), (2, 1), (2, 2)])
    for v in g.clients():
        assert len(complement_neighborhood(g, v)) == 0


def test_complement_neighborhood_edgeless_is_full_opposite_qlan():
    g = client_graph(2, 2)
    assert complement_neighborhood(g, client(1, 1)).members == frozenset(
        {client(2, 1), client(2, 2)}
    )


def test_complement_neighborhood_matches_set_difference():
    rng = random.Random(77)
    for _ in range(25):
        g = random_client_graph(rng, 3, 4)
        for v in g.clients():
            opposite = set(g.clients(v.qlan.other))
            expected = opposite - set(neighbors(g, v).members)
            assert complement_neighborhood(g, v).members == frozenset(expected)


def test_complement_neighborhood_rejects_super():
    g = client_graph(1, 1, [(1, 1)])
    s = super_node(1)
    aug = InterQlanGraph(g.vertices | {s}, g.edges)
    with pytest.raises(ValidationError):
        complement_neighborhood(aug, s)


def test_complement_neighborhood_excludes_supers_from_members():
    a, b, s2 = client(1, 1), client(2, 1), super_node(2)
    g = InterQlanGraph(frozenset({a, b, s2}), frozenset())
    assert complement_neighborhood(g, a).members == frozenset({b})


# -- local complementation -------------------------------------------------


def test_local_complement_at_isolated_vertex_is_identity():
    g = client_graph(2, 3, [(1, 2)])
    assert local_complement(g, client(2, 3)) == g


def test_local_complement_path_becomes_triangle():
    # path 1.1 -- 2.1 -- 1.2; complementing at the middle adds (1.1, 1.2),
    # an intra-QLAN edge, which intermediate graphs are allowed to carry
    a, b, c = client(1, 1), client(2, 1), client(1, 2)
    g = client_graph(2, 1, [(1, 1), (2, 1)])
    out = local_complement(g, b)
    assert out.edges == g.edges | {make_edge(a, c)}


def test_local_complement_involution_on_50_random_graphs():
    rng = random.Random(5)
    for _ in range(50):
        g = random_plain_graph(rng, max_vertices=10)
        for v in sorted(g.vertices, key=lambda u: u.name)[:3]:
            assert local_complement(local_complement(g, v), v) == g


@given(plain_graphs(max_vertices=8), st.integers(min_value=0, max_value=10**6))
def test_local_complement_involution_property(g, pick):
    vs = sorted(g.vertices, key=lambda u: u.name)
    v = vs[pick % len(vs)]
    assert local_complement(local_complement(g, v), v) == g


@given(plain_graphs(max_vertices=8), st.integers(min_value=0, max_value=10**6))
def test_local_complement_preserves_vertices(g, pick):
    vs = sorted(g.vertices, key=lambda u: u.name)
    v = vs[pick % len(vs)]
    assert local_complement(g, v).vertices == g.vertices


def test_local_complement_unknown_vertex():
    with pytest.raises(UnknownVertexError):
        local_complement(client_graph(1, 1), client(2, 9))


# -- vertex deletion --------------------------------------------------------


def test_delete_only_vertex_leaves_empty_graph():
    g = InterQlanGraph(frozenset({client(1, 1)}), frozenset())
    out = delete_vertex(g, client(1, 1))
    assert out.vertices == frozenset() and out.edges == frozenset()


def test_delete_from_edgeless_graph():
    g = client_graph(2, 2)
    out = delete_vertex(g, client(2, 2))
    assert out.vertices == g.vertices - {client(2, 2)}
    assert out.edges == frozenset()


def test_delete_star_hub_isolates_leaves():
    g = client_graph(1, 4, [(1, 1), (1, 2), (1, 3), (1, 4)])
    out = delete_vertex(g, client(1, 1))
    assert len(out.vertices) == 4
    assert out.edges == frozenset()


@given(plain_graphs(max_vertices=8), st.integers(min_value=0, max_value=10**6))
def test_delete_shrinks_vertex_set_by_one(g, pick):
    vs = sorted(g.vertices, key=lambda u: u.name)
    v = vs[pick % len(vs)]
    assert len(delete_vertex(g, v).vertices) == len(g.vertices) - 1


# -- graph complement --------------------------------------------------------


def test_complement_of_complete_bipartite_is_edgeless():
    g = client_graph(2, 2, [(1, 1), (1, 2), (2, 1), (2, 2)])
    assert complement_graph(g).edges == frozenset()


def test_complement_of_edgeless_is_complete_bipartite():
    g = client_graph(2, 2)
    assert len(complement_graph(g).edges) == 4


def test_complement_rejects_super_nodes():
    g = client_graph(1, 1, [(1, 1)])
    aug = InterQlanGraph(g.vertices | {super_node(1)}, g.edges)
    with pytest.raises(ValidationError):
        complement_graph(aug)


def test_complement_involution_exhaustive_2_plus_2():
    for g in all_client_graphs(2, 2):
        assert complement_graph(complement_graph(g)) == g


@given(client_graphs())
def test_complement_involution_property(g):
    assert complement_graph(complement_graph(g)) == g


@given(client_graphs())
def test_edge_counts_partition_all_cross_pairs(g):
    assert len(g.edges) + len(complement_graph(g).edges) == g.n1 * g.n2


@given(client_graphs())
def test_neighbors_and_complement_partition_opposite_qlan(g):
    for v in g.clients():
        near = neighbors(g, v).members
        far = complement_neighborhood(g, v).members
        assert near & far == frozenset()
        assert near | far == frozenset(g.clients(v.qlan.other))


# -- serialization -----------------------------------------------------------


def test_json_round_trip_client_graph():
    g = client_graph(3, 4, [(1, 2), (2, 2), (3, 4)])
    assert graph_from_json(graph_to_json(g)) == g


def test_json_round_trip_with_supers():
    base = client_graph(2, 2, [(1, 1)])
    s1, s2 = super_node(1), super_node(2)
    g = InterQlanGraph(
        base.vertices | {s1, s2},
        base.edges | {make_edge(s1, s2), make_edge(client(1, 1), s2)},
    )
    data = graph_to_json(g)
    assert data["supers"] == {"s1": True, "s2": True}
    assert ["s1", "s2"] in data["super_edges"]
    assert graph_from_json(data) == g


def test_json_rejects_non_contiguous_clients():
    g = InterQlanGraph(frozenset({client(1, 2), client(2, 1)}), frozenset())
    with pytest.raises(ValidationError, match="contiguous"):
        graph_to_json(g)


def test_json_rejects_malformed_edge_entry():
    with pytest.raises(ValidationError):
        graph_from_json({"n1": 1, "n2": 1, "edges": [["1.1"]]})


def test_dot_export_structure():
    base = client_graph(2, 2, [(1, 2)])
    g = InterQlanGraph(base.vertices | {super_node(1)}, base.edges)
    dot = to_dot(g)
    lines = [ln.strip() for ln in dot.strip().splitlines()]
    assert lines[0].startswith("graph ") and lines[0].endswith("{")
    assert lines[-1] == "}"
    assert '"1.1" -- "2.2";' in lines or '"1.2" -- "2.2";' in lines
    # one visual class per population
    q1_style = next(ln for ln in lines if ln.startswith('"1.1"'))
    q2_style = next(ln for ln in lines if ln.startswith('"2.1"'))
    s_style = next(ln for ln in lines if ln.startswith('"s1"'))
    assert q1_style != q2_style != s_style
    assert dot.count("--") == len(g.edges)
