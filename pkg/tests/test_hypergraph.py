"""Tests for the attributed hypergraph model."""

import numpy as np
import pytest

from permissible_walks.attributes import Category, Interval
from permissible_walks.errors import (
    DuplicateName,
    EmptyEdgeSet,
    EmptyVertexSet,
    InputError,
    NonIncidenceAttribute,
    UnknownVertexInEdge,
)
from permissible_walks.hypergraph import (
    build_hypergraph,
    dual,
    hypergraph_from_dict,
    hypergraph_to_dict,
    incidence_matrix,
    restrict_edges,
)


def test_toy_shape(toy):
    """Test counts and lookups on the toy meetings."""
    assert toy.n_vertices == 6
    assert toy.n_edges == 4
    assert toy.n_incidences == 10
    assert toy.edge_sizes() == [2, 2, 3, 3]
    assert toy.member_names(toy.edge_id("M3")) == ["P2", "P3", "P4"]
    assert toy.degree(toy.vertex_id("P4")) == 2
    assert toy.memberships(toy.vertex_id("P5")) == {toy.edge_id("M1"), toy.edge_id("M2")}


def test_unknown_names_raise(toy):
    with pytest.raises(InputError):
        toy.vertex_id("P9")
    with pytest.raises(InputError):
        toy.edge_id("M9")


def test_build_validates_inputs():
    """Test each construction error."""
    with pytest.raises(EmptyVertexSet):
        build_hypergraph([], [["a"]])
    with pytest.raises(EmptyEdgeSet):
        build_hypergraph(["a"], [])
    with pytest.raises(UnknownVertexInEdge):
        build_hypergraph(["a"], [["a", "b"]])
    with pytest.raises(DuplicateName):
        build_hypergraph(["a", "a"], [["a"]])
    with pytest.raises(DuplicateName):
        build_hypergraph(["a", "b"], [["a"], ["b"]], edge_names=["x", "x"])
    with pytest.raises(NonIncidenceAttribute):
        build_hypergraph(
            ["a", "b"], [["a"], ["b"]], incidence_attrs={("a", "e1"): {"t": Interval(0, 1)}}
        )
    with pytest.raises(InputError):
        build_hypergraph(["a"], [["a"]], edge_attrs={"e7": {"c": Category("x")}})


def test_repeated_member_sets_are_distinct_edges():
    """Test that the hyperedge family is indexed, not a set."""
    hypergraph = build_hypergraph(["a", "b"], [["a", "b"], ["b", "a"]])
    assert hypergraph.n_edges == 2
    assert hypergraph.edges[0] == hypergraph.edges[1]


def test_incidence_matrix(toy):
    matrix = incidence_matrix(toy)
    assert matrix.shape == (6, 4)
    assert matrix.sum() == toy.n_incidences
    assert matrix[toy.vertex_id("P1"), toy.edge_id("M4")]
    assert not matrix[toy.vertex_id("P1"), toy.edge_id("M1")]


def test_dual_transposes_incidences(toy):
    """Test that the dual swaps vertices and hyperedges and is an involution."""
    flipped = dual(toy)
    assert flipped.vertex_names == toy.edge_names
    assert flipped.edge_names == toy.vertex_names
    np.testing.assert_array_equal(incidence_matrix(flipped), incidence_matrix(toy).T)
    assert flipped.vertex_attrs == toy.edge_attrs
    m1, p5 = toy.edge_id("M1"), toy.vertex_id("P5")
    assert flipped.incidence_attrs[(m1, p5)] == toy.incidence_attrs[(p5, m1)]
    again = dual(flipped)
    assert again.edges == toy.edges
    assert dict(again.incidence_attrs) == dict(toy.incidence_attrs)


def test_restrict_edges_keeps_large_edges(toy):
    """Test filtering hyperedges by size."""
    big = restrict_edges(toy, 3)
    assert big.edge_names == ("M3", "M4")
    assert big.n_vertices == toy.n_vertices
    assert big.edge_attrs[big.edge_id("M4")]["time"] == Interval(4, 5)
    assert (big.vertex_id("P1"), big.edge_id("M4")) in big.incidence_attrs
    with pytest.raises(EmptyEdgeSet):
        restrict_edges(toy, 4)


def test_document_round_trip(toy):
    """Test that the JSON document reproduces the hypergraph."""
    document = hypergraph_to_dict(toy)
    assert document["kind"] == "hypergraph"
    assert [e["id"] for e in document["edges"]] == ["M1", "M2", "M3", "M4"]
    assert hypergraph_from_dict(document) == toy


def test_malformed_document():
    with pytest.raises(InputError):
        hypergraph_from_dict({"vertices": [{"name": "a"}], "edges": []})
