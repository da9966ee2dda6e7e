"""Tests for attribute values, predicates and marginalizers."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from permissible_walks.attributes import (
    Boolean,
    BoolOr,
    Category,
    CategoryEqual,
    Conjunction,
    DirectionChains,
    DirectionPair,
    FiniteSet,
    Interval,
    Marginalizer,
    SetIntersectsAtLeast,
    StrongOrder,
    Timestamp,
    TimestampLessEq,
    decode_attributes,
    decode_value,
    encode_attributes,
    encode_value,
    eval_set_intersects,
    eval_strong_order,
    extend_to_incidences,
    hull,
    marginalize_edges,
    marginalize_vertices,
    parse_predicate,
)
from permissible_walks.errors import (
    ConfigurationError,
    EmptyCollection,
    InputError,
    InvalidParameter,
    KindMismatch,
    MissingAttribute,
    MissingIncidenceAttribute,
    PredicateSpecError,
)
from permissible_walks.hypergraph import build_hypergraph

from .strategies import hypergraphs, intervals, oracle_settings, timed_hypergraphs


def test_interval_rejects_reversed_bounds():
    """Test that an interval needs lo <= hi."""
    with pytest.raises(InputError):
        Interval(3, 2)
    with pytest.raises(InputError):
        Interval(0, float("inf"))


def test_strong_order_examples():
    """Test the strong order on touching, disjoint and overlapping intervals."""
    assert eval_strong_order(Interval(0, 1), Interval(2, 3))
    assert eval_strong_order(Interval(0, 2), Interval(2, 3))
    assert not eval_strong_order(Interval(0, 3), Interval(2, 4))
    assert not eval_strong_order(Interval(2, 3), Interval(0, 1))
    assert eval_strong_order(Interval(5, 5), Interval(5, 5))


def test_strong_order_rejects_other_kinds():
    """Test that the strong order only reads intervals."""
    with pytest.raises(KindMismatch):
        eval_strong_order(FiniteSet.of("A"), Interval(0, 1))


@oracle_settings(10_000)
@given(intervals, intervals, intervals)
def test_strong_order_is_transitive(a, b, c):
    """Test transitivity of the strong order."""
    if eval_strong_order(a, b) and eval_strong_order(b, c):
        assert eval_strong_order(a, c)


@oracle_settings(10_000)
@given(intervals, intervals)
def test_strong_order_two_cycles_only_for_identical_points(a, b):
    """Test that a <= b and b <= a forces one shared degenerate interval."""
    if eval_strong_order(a, b) and eval_strong_order(b, a):
        assert a == b
        assert a.lo == a.hi


def test_set_intersects_threshold():
    """Test the set intersection predicate at several thresholds."""
    a = FiniteSet.of("A", "B", "C")
    b = FiniteSet.of("B", "C", "D")
    assert eval_set_intersects(a, b)
    assert eval_set_intersects(a, b, 2)
    assert not eval_set_intersects(a, b, 3)
    assert not eval_set_intersects(FiniteSet(), FiniteSet())
    assert SetIntersectsAtLeast(2)(a, b)


def test_set_intersects_threshold_must_be_positive():
    """Test that t must be a positive integer."""
    with pytest.raises(InvalidParameter):
        SetIntersectsAtLeast(0)
    with pytest.raises(ConfigurationError):
        SetIntersectsAtLeast(True)


def test_predicate_symmetry_flags():
    """Test which predicates report themselves as symmetric."""
    assert SetIntersectsAtLeast().symmetric
    assert CategoryEqual().symmetric
    assert not StrongOrder().symmetric
    assert not TimestampLessEq().symmetric
    both = Conjunction((("topics", SetIntersectsAtLeast()), ("class", CategoryEqual())))
    assert both.symmetric
    assert not Conjunction((("time", StrongOrder()),)).symmetric


def test_simple_predicates():
    """Test the boolean, category, timestamp and direction predicates."""
    assert BoolOr()(Boolean(False), Boolean(True))
    assert not parse_predicate("bool-and")(Boolean(False), Boolean(True))
    assert CategoryEqual()(Category("x"), Category("x"))
    assert TimestampLessEq()(Timestamp(1), Timestamp(1))
    assert not TimestampLessEq()(Timestamp(2), Timestamp(1))
    assert DirectionChains()(DirectionPair("a", "b"), DirectionPair("b", "c"))
    assert not DirectionChains()(DirectionPair("a", "b"), DirectionPair("a", "c"))


def test_conjunction_holds_on_attribute_maps():
    """Test that a conjunction reads its own attributes."""
    q = Conjunction((("time", StrongOrder()), ("topics", SetIntersectsAtLeast())))
    first = {"time": Interval(0, 1), "topics": FiniteSet.of("A", "B")}
    second = {"time": Interval(2, 3), "topics": FiniteSet.of("B")}
    third = {"time": Interval(2, 3), "topics": FiniteSet.of("C")}
    assert q.holds(first, second, None)
    assert not q.holds(first, third, None)
    assert q.required_attributes(None) == ("time", "topics")
    with pytest.raises(MissingAttribute):
        q.holds({"time": Interval(0, 1)}, second, None)


def test_conjunction_cannot_be_empty_or_nested():
    """Test conjunction construction errors."""
    with pytest.raises(PredicateSpecError):
        Conjunction(())
    inner = Conjunction((("time", StrongOrder()),))
    with pytest.raises(PredicateSpecError):
        Conjunction((("time", inner),))


@pytest.mark.parametrize(
    "spec, expected",
    [
        ("strong-order", StrongOrder()),
        ("set-intersects", SetIntersectsAtLeast(1)),
        ("set-intersects:t=3", SetIntersectsAtLeast(3)),
        ("category-equal", CategoryEqual()),
        ("timestamp-leq", TimestampLessEq()),
        ("direction-chains", DirectionChains()),
        (" strong-order ", StrongOrder()),
    ],
)
def test_parse_simple_predicates(spec, expected):
    """Test parsing of every simple predicate spec."""
    assert parse_predicate(spec) == expected


def test_parse_conjunction_round_trips_spec():
    """Test parsing a conjunction and rendering it back."""
    q = parse_predicate("and(time:strong-order, topics:set-intersects:t=2)")
    assert isinstance(q, Conjunction)
    assert q.clauses == (("time", StrongOrder()), ("topics", SetIntersectsAtLeast(2)))
    assert parse_predicate(q.spec) == q


@pytest.mark.parametrize(
    "spec",
    ["", "strong", "set-intersects:t=0", "set-intersects:t=x", "and()", "and(time)", "and(a:and(b:strong-order))"],
)
def test_parse_rejects_bad_specs(spec):
    """Test that malformed specs are configuration errors."""
    with pytest.raises(PredicateSpecError):
        parse_predicate(spec)


def test_marginalize_topics_onto_meetings(toy_incidences):
    """Test set-union marginalization of incidence topics onto meetings."""
    topics = marginalize_edges(toy_incidences, "topics", Marginalizer.SET_UNION)
    by_name = {toy_incidences.edge_names[e]: value for e, value in topics.items()}
    assert by_name == {
        "M1": FiniteSet.of("A", "B", "C"),
        "M2": FiniteSet.of("E", "F"),
        "M3": FiniteSet.of("B", "C", "D"),
        "M4": FiniteSet.of("C"),
    }


def test_marginalize_topics_onto_people(toy_incidences):
    """Test set-union marginalization onto vertices."""
    topics = marginalize_vertices(toy_incidences, "topics", Marginalizer.SET_UNION)
    p5 = toy_incidences.vertex_id("P5")
    assert topics[p5] == FiniteSet.of("A", "C", "E", "F")
    assert len(topics) == 6


def test_marginalize_interval_hull():
    """Test interval-hull marginalization and skipping of empty hyperedges."""
    hypergraph = build_hypergraph(
        vertices=["a", "b"],
        edges=[["a", "b"], []],
        incidence_attrs={("a", "e0"): {"t": Interval(1, 3)}, ("b", "e0"): {"t": Interval(2, 7)}},
    )
    hulls = marginalize_edges(hypergraph, "t", Marginalizer.INTERVAL_HULL)
    assert hulls == {0: Interval(1, 7)}


def test_marginalize_reports_missing_incidence_attribute(toy_incidences):
    """Test that every incidence must carry the attribute."""
    with pytest.raises(MissingIncidenceAttribute):
        marginalize_edges(toy_incidences, "sentiment", Marginalizer.SET_UNION)


def test_set_union_rejects_intervals():
    """Test kind checking in the set-union marginalizer."""
    with pytest.raises(KindMismatch):
        Marginalizer.SET_UNION.reduce([Interval(0, 1)])
    with pytest.raises(EmptyCollection):
        Marginalizer.INTERVAL_HULL.reduce([])


def test_hull_mixes_intervals_and_timestamps():
    assert hull([Interval(2, 3), Timestamp(9), Interval(-1, 0)]) == Interval(-1, 9)


def test_extend_edge_time_to_incidences(toy):
    """Test copying a meeting attribute down to its incidences."""
    extended = extend_to_incidences(toy, "time")
    assert len(extended) == toy.n_incidences
    m4 = toy.edge_id("M4")
    assert extended[(toy.vertex_id("P1"), m4)] == Interval(4, 5)
    with pytest.raises(MissingAttribute):
        extend_to_incidences(toy, "time", source="vertex")
    with pytest.raises(InvalidParameter):
        extend_to_incidences(toy, "time", source="incidence")


def test_value_codec():
    """Test the JSON attribute encoding of each kind."""
    attrs = {
        "time": Interval(1, 2),
        "topics": FiniteSet.of("b", "a"),
        "flag": Boolean(True),
        "class": Category("A"),
        "at": Timestamp(4.5),
        "direction": DirectionPair("u", "v"),
    }
    encoded = encode_attributes(attrs)
    assert encoded["topics"] == {"set": ["a", "b"]}
    assert decode_attributes(encoded) == attrs
    assert decode_value(encode_value(Interval(0, 0))) == Interval(0, 0)


@pytest.mark.parametrize(
    "data",
    [
        {"interval": [3, 1]},
        {"colour": "red"},
        {"set": ["a"], "bool": True},
        {"interval": 5},
        {"interval": "ab"},
        {"set": "abc"},
        {"direction": "uv"},
    ],
)
def test_decode_rejects_bad_values(data):
    with pytest.raises(InputError):
        decode_value(data)


@given(st.sets(st.sampled_from("ABCDEFG")), st.sets(st.sampled_from("ABCDEFG")))
def test_set_intersects_is_symmetric(a, b):
    """Test the symmetry set-intersects reports."""
    x, y = FiniteSet(tuple(a)), FiniteSet(tuple(b))
    assert eval_set_intersects(x, y) == eval_set_intersects(y, x)


@oracle_settings(200)
@given(hypergraphs(attributed=True))
def test_extend_then_hull_gives_back_edge_times(hypergraph):
    """Test that copying edge times onto incidences and taking hulls is lossless."""
    extended = extend_to_incidences(hypergraph, "time")
    rebuilt = build_hypergraph(
        hypergraph.vertex_names,
        [hypergraph.member_names(e) for e in hypergraph.edge_ids],
        incidence_attrs={
            (hypergraph.vertex_names[v], hypergraph.edge_names[e]): {"time": value}
            for (v, e), value in extended.items()
        },
    )
    assert marginalize_edges(rebuilt, "time", Marginalizer.INTERVAL_HULL) == {
        e: hypergraph.edge_attrs[e]["time"] for e in hypergraph.edge_ids if hypergraph.members(e)
    }


@oracle_settings(200)
@given(timed_hypergraphs())
def test_interval_hulls_cover_their_cells(hypergraph):
    """Test that every hull contains its cell intervals and is attained by them."""
    by_edge = marginalize_edges(hypergraph, "time", Marginalizer.INTERVAL_HULL)
    by_vertex = marginalize_vertices(hypergraph, "time", Marginalizer.INTERVAL_HULL)
    for hulls, key in ((by_edge, lambda v, e: e), (by_vertex, lambda v, e: v)):
        cells = {}
        for v, e in hypergraph.incidences():
            cells.setdefault(key(v, e), []).append(hypergraph.incidence_attrs[(v, e)]["time"])
        assert set(hulls) == set(cells)
        for owner, members in cells.items():
            assert all(hulls[owner].lo <= c.lo and c.hi <= hulls[owner].hi for c in members)
            assert hulls[owner].lo == min(c.lo for c in members)
            assert hulls[owner].hi == max(c.hi for c in members)
