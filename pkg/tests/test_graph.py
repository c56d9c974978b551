from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings

from oracles import to_nx
from pivotgraph.errors import InputError
from pivotgraph.graph import (
    CYAN,
    PINK,
    ColoredGraph,
    add_apex,
    betti,
    degree,
    distance,
    is_connected,
    is_tree,
    prune_leaves,
    prune_to_core,
)
from pivotgraph.pivot import gen_circle, gen_necklace, gen_path, gen_star
from strategies import graphs


def test_circle_degrees_and_betti():
    g = gen_circle(5)
    assert all(degree(g, v) == 2 for v in g.vertices)
    assert betti(g) == 1


def test_isolated_vertex():
    g = ColoredGraph.from_edges(["a"], [])
    assert degree(g, "a") == 0
    assert is_connected(g)
    assert betti(g) == 0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_necklace_degrees_and_betti(n):
    g = gen_necklace(n)
    assert all(degree(g, f"a{i}") == 4 for i in range(1, n + 1))
    assert betti(g) == n + 1


def test_unknown_vertex_rejected():
    with pytest.raises(InputError):
        degree(gen_circle(3), "zz")


def test_connectivity_edge_cases():
    assert not is_connected(ColoredGraph.from_edges([], []))
    assert not is_connected(ColoredGraph.from_edges(["a", "b"], []))
    assert is_connected(gen_necklace(2))
    with pytest.raises(InputError):
        betti(ColoredGraph.from_edges(["a", "b"], []))


@pytest.mark.parametrize(
    "vertices,edges,colors",
    [
        (["a", "a"], [], None),
        (["a"], [("a", "a")], None),
        (["a", "b"], [("a", "b"), ("b", "a")], None),
        (["a"], [("a", "b")], None),
        ([""], [], None),
        (["a", "b"], [("a", "b")], {"a": CYAN, "b": CYAN}),
        (["a", "b"], [("a", "b")], {"a": CYAN}),
        (["a"], [], {"a": "green"}),
    ],
)
def test_invalid_graphs_rejected(vertices, edges, colors):
    with pytest.raises(InputError):
        ColoredGraph.from_edges(vertices, edges, colors)


def test_bipartite_colored_graph_accepted():
    g = ColoredGraph.from_edges(["A", "P"], [("A", "P")], {"A": CYAN, "P": PINK})
    assert g.is_colored()


def test_distances():
    assert distance(gen_circle(6), "v0", "v3") == 3
    assert distance(gen_circle(6), "v2", "v2") == 0
    assert distance(gen_path(3), "v0", "v2") == 2


def test_prune_examples():
    assert prune_leaves(gen_path(3)).vertices == ["v1"]
    assert prune_leaves(gen_circle(5)) == gen_circle(5)
    assert prune_leaves(gen_star(3)).vertices == ["v0"]
    # single pass only
    assert prune_leaves(gen_path(5)).vertices == ["v1", "v2", "v3"]


def test_apex_examples():
    g, apex = add_apex(gen_circle(4), gen_circle(4).vertices)
    assert betti(g) == 4
    assert g.without(apex) == gen_circle(4)
    g, _ = add_apex(gen_path(2), ["v0", "v1"])
    assert betti(g) == 1 and g.n_edges == 3
    with pytest.raises(InputError):
        add_apex(gen_circle(4), [])


def test_round_trip_json_is_sorted():
    g = ColoredGraph.from_edges(["b", "a", "c"], [("c", "a"), ("b", "a")])
    d = g.to_dict()
    assert d == {"vertices": [{"id": "a"}, {"id": "b"}, {"id": "c"}], "edges": [["a", "b"], ["a", "c"]]}
    assert ColoredGraph.from_edges([v["id"] for v in d["vertices"]], d["edges"]) == g


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=8))
def test_structure_matches_networkx(g):
    h = to_nx(g)
    assert is_connected(g) == nx.is_connected(h)
    if is_connected(g):
        assert betti(g) == h.number_of_edges() - h.number_of_nodes() + 1 >= 0
        assert (betti(g) == 0) == is_tree(g) == nx.is_tree(h)
        lengths = dict(nx.all_pairs_shortest_path_length(h))
        for a in g.vertices:
            for b in g.vertices:
                assert distance(g, a, b) == lengths[a][b]


@settings(max_examples=200, deadline=None)
@given(graphs(min_n=2, max_n=9, connected=True))
def test_pruning_properties(g):
    h = prune_leaves(g)
    assert h.n_vertices >= 1 or g.n_vertices == 2
    if h.n_vertices:
        assert is_connected(h)
    if betti(g) > 0:
        assert betti(h) == betti(g)
    core = prune_to_core(g)
    assert core.n_vertices <= 1 or min(degree(core, v) for v in core.vertices) >= 2


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=7, connected=True))
def test_apex_betti_formula(g):
    targets = g.vertices[: max(1, g.n_vertices // 2)]
    h, apex = add_apex(g, targets)
    assert betti(h) == betti(g) + len(targets) - 1
    assert h.without(apex) == g
