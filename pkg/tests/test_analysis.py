"""Tests for interaction matrices, components, reachability and traces."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from permissible_walks.analysis import (
    InteractionMatrix,
    Trace,
    class_graph,
    classes_from_attribute,
    component_composition,
    downstream_neighbors,
    downstream_reachable,
    edge_intervals,
    interaction_matrix,
    remove_isolated,
    s_sweep,
    sample_points,
    trace,
    trace_by_class,
    weakly_connected_components,
)
from permissible_walks.attributes import Interval, SetIntersectsAtLeast, StrongOrder
from permissible_walks.errors import (
    EmptyCollection,
    InvalidParameter,
    SampleOutsideSupport,
    UnknownNode,
    UnlabeledNode,
)
from permissible_walks.linegraph import (
    apply_predicates,
    attributed_s_line_graph,
    intersect,
    permissible_walk_graph,
)

from .strategies import hypergraphs, intervals, oracle_settings

TIME_TOPIC_CLAUSES = [("time", StrongOrder()), ("topics", SetIntersectsAtLeast())]


@pytest.fixture
def p_it(toy):
    """Permissible walk graph of the toy meetings under time and topic predicates."""
    return apply_predicates(attributed_s_line_graph(toy, 1), TIME_TOPIC_CLAUSES)


def test_interaction_matrix(p_it):
    """Test class counts of the toy graph (M1, M2 in X; M3, M4 in Y)."""
    matrix = interaction_matrix(p_it, classes_from_attribute(p_it, "class"))
    assert matrix.labels == ("X", "Y")
    assert matrix.to_rows() == [[0, 1], [0, 1]]
    assert matrix["X", "Y"] == 1
    assert matrix.total == 2
    assert matrix.cross_class == 1


def test_interaction_matrix_with_fixed_labels(p_it):
    class_of = classes_from_attribute(p_it, "class")
    matrix = interaction_matrix(p_it, class_of, labels=["Y", "X", "Z"])
    assert matrix.to_rows() == [[1, 0, 0], [1, 0, 0], [0, 0, 0]]
    with pytest.raises(UnlabeledNode):
        interaction_matrix(p_it, class_of, labels=["X"])


def test_interaction_matrix_needs_every_label(p_it):
    with pytest.raises(UnlabeledNode):
        interaction_matrix(p_it, {0: "X"})
    with pytest.raises(UnlabeledNode):
        classes_from_attribute(p_it, "community")


def test_interaction_matrix_equality():
    first = InteractionMatrix(("A",), np.array([[2]]))
    assert first == InteractionMatrix(("A",), np.array([[2]]))
    assert first != InteractionMatrix(("A",), np.array([[3]]))


def test_class_graph(p_it):
    """Test that the class graph's adjacency is the interaction matrix."""
    graph = class_graph(interaction_matrix(p_it, classes_from_attribute(p_it, "class")))
    assert set(graph.nodes) == {"X", "Y"}
    assert set(graph.edges) == {("X", "Y"), ("Y", "Y")}
    assert graph.edges["X", "Y"]["weight"] == 1


def test_components(p_it):
    """Test the weak components of the toy graph, largest first."""
    components = weakly_connected_components(p_it)
    assert [c.size for c in components] == [3, 1]
    assert components[0].members == ("M1", "M3", "M4")
    assert components[1].members == ("M2",)


def test_component_composition(p_it):
    composition = component_composition(p_it, classes_from_attribute(p_it, "class"))
    assert composition == [{"X": 1, "Y": 2}, {"X": 1}]


def test_downstream(p_it, toy):
    """Test neighbors and reachability from M1, and from the sink M4."""
    m1, m3, m4 = (toy.edge_id(n) for n in ("M1", "M3", "M4"))
    assert downstream_neighbors(p_it, m1) == {m3}
    assert downstream_reachable(p_it, m1) == {m3, m4}
    assert downstream_reachable(p_it, m4) == set()
    assert downstream_reachable(p_it, toy.edge_id("M2")) == set()
    with pytest.raises(UnknownNode):
        downstream_reachable(p_it, 42)


def test_reachable_includes_start_on_a_cycle(toy):
    """Test that a node reachable from itself through a cycle is reported."""
    topics_only = apply_predicates(attributed_s_line_graph(toy, 1), TIME_TOPIC_CLAUSES[1:])
    m1, m3, m4 = (toy.edge_id(n) for n in ("M1", "M3", "M4"))
    assert downstream_reachable(topics_only, m1) == {m1, m3, m4}


def test_remove_isolated(p_it):
    """Test dropping M2, the only node without arcs."""
    graph, removed = remove_isolated(p_it)
    assert removed == 1
    assert [graph.node_names[n] for n in graph.nodes] == ["M1", "M3", "M4"]
    assert graph.arcs == p_it.arcs
    again, removed_again = remove_isolated(graph)
    assert removed_again == 0
    assert again.nodes == graph.nodes


def test_trace_closed_endpoints():
    """Test that an interval counts at both of its endpoints."""
    collection = [Interval(0, 1), Interval(1, 3), Interval(2, 3)]
    evaluator = Trace(tuple(collection))
    assert evaluator.support == Interval(0, 3)
    assert evaluator(0) == 1
    assert evaluator(1) == 2
    assert evaluator(1.5) == 1
    assert evaluator(3) == 2
    assert trace(collection, samples=[0.0, 1.0, 2.0]) == [(0.0, 1), (1.0, 2), (2.0, 2)]


def test_trace_evenly_spaced_samples(p_it):
    """Test five samples across the toy meeting times."""
    samples = trace(edge_intervals(p_it, "time").values(), samples=5)
    assert [t for t, _ in samples] == [0.0, 1.25, 2.5, 3.75, 5.0]
    assert [n for _, n in samples] == [1, 0, 2, 0, 1]


def test_trace_rejects_bad_samples():
    collection = [Interval(0, 1)]
    with pytest.raises(SampleOutsideSupport):
        trace(collection, samples=[2.0])
    with pytest.raises(InvalidParameter):
        trace(collection, samples=0)
    with pytest.raises(EmptyCollection):
        trace([], samples=5)
    with pytest.raises(InvalidParameter):
        sample_points(Interval(0, 1), True)


def test_degenerate_support():
    assert trace([Interval(2, 2)], samples=3) == [(2.0, 1), (2.0, 1), (2.0, 1)]


def test_trace_by_class_shares_support():
    """Test per-class traces evaluated on the union support."""
    traces = trace_by_class({"A": [Interval(0, 1)], "B": [Interval(2, 4)], "C": []}, samples=5)
    assert list(traces) == ["A", "B", "C"]
    assert [t for t, _ in traces["A"]] == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert [n for _, n in traces["A"]] == [1, 1, 0, 0, 0]
    assert [n for _, n in traces["B"]] == [0, 0, 1, 1, 1]
    assert [n for _, n in traces["C"]] == [0, 0, 0, 0, 0]


@oracle_settings(200)
@given(
    st.lists(intervals, min_size=1, max_size=50),
    st.lists(st.floats(0, 1), min_size=100, max_size=100),
)
def test_trace_matches_indicator_sum(collection, fractions):
    """Test the trace at random samples and at every endpoint against brute force."""
    support = Trace(tuple(collection)).support
    points = [support.lo + f * (support.hi - support.lo) for f in fractions]
    points += [i.lo for i in collection] + [i.hi for i in collection]
    points = [min(max(t, support.lo), support.hi) for t in points]
    for t, n in trace(collection, samples=points):
        assert n == sum(1 for i in collection if i.lo <= t <= i.hi)


def test_s_sweep_on_toy(toy):
    """Test per-s matrices and components on the toy meetings."""
    points = s_sweep(toy, [1, 2, 3], [("time", StrongOrder())], "class")
    assert [p.s for p in points] == [1, 2, 3]
    assert [p.matrix.total for p in points] == [3, 1, 0]
    assert [p.cross_class for p in points] == [1, 0, 0]
    assert points[0].component_sizes == (4,)
    assert points[2].component_sizes == (1, 1, 1, 1)
    assert all(p.matrix.labels == ("X", "Y") for p in points)


def test_s_sweep_reports_each_step(toy):
    seen = []
    s_sweep(toy, [0, 1], [], "class", on_step=seen.append)
    assert seen == [0, 1]


def alternating_classes(graph):
    return {node: "AB"[node % 2] for node in graph.nodes}


@oracle_settings(200)
@given(hypergraphs(attributed=True), st.integers(0, 3))
def test_reachability_properties(hypergraph, s):
    """Test neighbors within reachable sets, and reachability growing with the arc set."""
    line_graph = attributed_s_line_graph(hypergraph, s)
    narrow = apply_predicates(line_graph, TIME_TOPIC_CLAUSES)
    wide = apply_predicates(line_graph, [("time", StrongOrder())])
    assert narrow.arcs <= wide.arcs
    for node in line_graph.nodes:
        reachable = downstream_reachable(narrow, node)
        assert downstream_neighbors(narrow, node) <= reachable
        assert reachable <= downstream_reachable(wide, node)


@oracle_settings(200)
@given(hypergraphs(attributed=True), st.integers(0, 3))
def test_interaction_matrix_counts(hypergraph, s):
    """Test that the matrix sums to the arc count and shrinks under intersection."""
    line_graph = attributed_s_line_graph(hypergraph, s)
    by_time = permissible_walk_graph(line_graph, "time", StrongOrder())
    by_topics = permissible_walk_graph(line_graph, "topics", SetIntersectsAtLeast())
    both = intersect(by_time, by_topics)
    class_of = alternating_classes(line_graph)
    matrices = [
        interaction_matrix(graph, class_of, labels=["A", "B"])
        for graph in (by_time, by_topics, both)
    ]
    for graph, matrix in zip((by_time, by_topics, both), matrices):
        assert matrix.total == len(graph.arcs)
    assert np.all(matrices[2].counts <= matrices[0].counts)
    assert np.all(matrices[2].counts <= matrices[1].counts)


@oracle_settings(200)
@given(hypergraphs(attributed=True), st.integers(0, 3))
def test_remove_isolated_keeps_every_arc(hypergraph, s):
    graph = apply_predicates(attributed_s_line_graph(hypergraph, s), TIME_TOPIC_CLAUSES)
    touched = {node for arc in graph.arcs for node in arc}
    trimmed, removed = remove_isolated(graph)
    assert trimmed.arcs == graph.arcs
    assert set(trimmed.nodes) == touched
    assert removed == len(graph.nodes) - len(touched)
