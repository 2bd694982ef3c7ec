"""Parser and graph-model behavior."""
from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodeswarm.errors import (
    EndpointOutOfRangeError,
    MalformedTupleError,
    MissingNodeClauseError,
    UnknownNodeError,
)
from nodeswarm.graph import DuplicateEdgeWarning, Edge, Graph, parse_graph

from sample_problems import EIGHT_NODE_SP_TEXT


def test_parse_eight_node_weighted():
    g = parse_graph(EIGHT_NODE_SP_TEXT, directed=False, weighted=True)
    assert g.node_count == 8
    assert g.node_ids == tuple(range(8))
    assert len(g.edges) == 13
    assert g.edges[0] == Edge(src=0, dst=7, weight=9)
    assert (7, 9) in g.neighbors(0)


def test_parse_range_clause_with_no_edges():
    g = parse_graph("The nodes are numbered from 0 to 1, and the edges are:",
                    directed=False, weighted=False)
    assert g.node_count == 2
    assert g.edges == ()


def test_parse_six_node_unweighted():
    text = ("The nodes are numbered from 0 to 5, and the edges are: (0, 3) (0, 1) "
            "(0, 2) (0, 4) (1, 5) (1, 4) (1, 2) (1, 3) (2, 4) (2, 5) (3, 5) (3, 4).")
    g = parse_graph(text, directed=False, weighted=False)
    assert g.node_count == 6
    assert len(g.edges) == 12


def test_parse_preserves_one_based_ids():
    g = parse_graph("The nodes are numbered from 1 to 20, and the edges are: (1, 20)",
                    directed=False, weighted=False)
    assert g.node_ids == tuple(range(1, 21))
    assert g.neighbors(1) == ((20, None),)


def test_whitespace_inside_tuples_is_tolerated():
    a = parse_graph("The graph has 4 nodes, and the edges are: (0, 3) (0,1)", False, False)
    b = parse_graph("The graph has 4 nodes, and the edges are: (0,3) (0, 1)", False, False)
    assert a == b


def test_missing_node_clause():
    with pytest.raises(MissingNodeClauseError):
        parse_graph("the edges are: (0,1)", directed=False, weighted=False)


def test_malformed_tuple_wrong_arity():
    with pytest.raises(MalformedTupleError):
        parse_graph("The graph has 3 nodes, and the edges are: (0,1,2)", False, False)
    with pytest.raises(MalformedTupleError):
        parse_graph("The graph has 3 nodes, and the edges are: (0,1)", False, True)


def test_malformed_tuple_non_integer():
    with pytest.raises(MalformedTupleError):
        parse_graph("The graph has 3 nodes, and the edges are: (0, x)", False, False)


def test_endpoint_out_of_range():
    with pytest.raises(EndpointOutOfRangeError):
        parse_graph("The graph has 3 nodes, and the edges are: (0, 5)", False, False)


def test_duplicate_edges_warn_and_dedupe():
    with pytest.warns(DuplicateEdgeWarning):
        g = parse_graph("The graph has 3 nodes, and the edges are: (0,1) (1,0)", False, False)
    assert len(g.edges) == 1


def test_self_loops_are_kept():
    g = parse_graph("The graph has 2 nodes, and the edges are: (0,0) (0,1)", False, False)
    assert Edge(src=0, dst=0) in g.edges
    assert (0, None) in g.neighbors(0)


def test_float_weights_parse_when_not_integer_formed():
    g = parse_graph("The graph has 2 nodes, and the edges are: (0, 1, 2.5)", False, True)
    assert g.edges[0].weight == 2.5
    g2 = parse_graph("The graph has 2 nodes, and the edges are: (0, 1, 7)", False, True)
    assert g2.edges[0].weight == 7 and isinstance(g2.edges[0].weight, int)


def test_node_weight_clauses_become_features():
    text = ("The graph has 3 nodes, and the edges are: (0,1). "
            "The weight of node 0 is 5. The weight of node 1 is 2. The weight of node 2 is 9.")
    g = parse_graph(text, directed=False, weighted=False)
    assert g.node_features == {0: "5", 1: "2", 2: "9"}
    assert g.feature_of(2) == "9"


def test_question_text_after_tuples_is_ignored():
    text = "The graph has 3 nodes, and the edges are: (0,1) (1,2). Is there a cycle (anywhere)?"
    g = parse_graph(text, directed=False, weighted=False)
    assert len(g.edges) == 2


def test_directed_neighbors_and_in_neighbors():
    g = parse_graph("The graph has 3 nodes, and the edges are: (0,1) (1,2)",
                    directed=True, weighted=False)
    assert g.neighbors(1) == ((2, None),)
    assert g.in_neighbors(1) == ((0, None),)
    assert g.neighbors(2) == ()


def test_unknown_node_raises():
    g = parse_graph("The graph has 2 nodes, and the edges are: (0,1)", False, False)
    with pytest.raises(UnknownNodeError):
        g.neighbors(9)


# -- properties --------------------------------------------------------------

@st.composite
def random_graphs(draw, max_nodes=12, directed=None, weighted=None):
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    directed = draw(st.booleans()) if directed is None else directed
    weighted = draw(st.booleans()) if weighted is None else weighted
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    edges = []
    for u, v in chosen:
        if directed and draw(st.booleans()):
            u, v = v, u
        weight = draw(st.integers(min_value=1, max_value=10)) if weighted else None
        edges.append(Edge(src=u, dst=v, weight=weight))
    return Graph(node_count=n, node_ids=tuple(range(n)), edges=tuple(edges),
                 directed=directed, weighted=weighted)


@given(random_graphs())
@settings(max_examples=150, deadline=None)
def test_serialize_parse_round_trip(g):
    assert parse_graph(g.serialize(), g.directed, g.weighted) == g


@given(random_graphs(directed=False))
@settings(max_examples=100, deadline=None)
def test_degree_sum_is_twice_edge_count(g):
    assert sum(g.degree(v) for v in g.node_ids) == 2 * len(g.edges)


@given(random_graphs(directed=False))
@settings(max_examples=100, deadline=None)
def test_undirected_neighbors_are_symmetric(g):
    for v in g.node_ids:
        for u, _ in g.neighbors(v):
            assert v in {x for x, _ in g.neighbors(u)}


def test_neighbors_of_node_one_in_reference_graph():
    g = parse_graph(EIGHT_NODE_SP_TEXT, directed=False, weighted=True)
    assert set(g.neighbors(1)) == {(0, 7), (7, 1)}


def test_isolated_node_has_no_neighbors():
    g = parse_graph("The graph has 3 nodes, and the edges are: (0,1)", False, False)
    assert g.neighbors(2) == ()
