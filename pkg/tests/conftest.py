"""
Shared fixtures: the four-meeting toy hypergraph and a small post log.
"""

import csv

import pytest

from permissible_walks.attributes import (
    Category,
    FiniteSet,
    Interval,
    Marginalizer,
    marginalize_edges,
)
from permissible_walks.hypergraph import build_hypergraph
from permissible_walks.ingest import POST_COLUMNS

PEOPLE = ["P1", "P2", "P3", "P4", "P5", "P6"]
MEETINGS = {
    "M1": ["P4", "P5"],
    "M2": ["P5", "P6"],
    "M3": ["P2", "P3", "P4"],
    "M4": ["P1", "P2", "P3"],
}
MEETING_TIMES = {
    "M1": Interval(0, 1),
    "M2": Interval(2, 3),
    "M3": Interval(2, 3),
    "M4": Interval(4, 5),
}
MEETING_CLASSES = {"M1": "X", "M2": "X", "M3": "Y", "M4": "Y"}

# Topics each person raised in each meeting
TOPICS = {
    ("P4", "M1"): {"B"},
    ("P5", "M1"): {"A", "C"},
    ("P5", "M2"): {"E", "F"},
    ("P6", "M2"): {"E"},
    ("P2", "M3"): {"B"},
    ("P3", "M3"): {"C", "D"},
    ("P4", "M3"): {"B", "C"},
    ("P1", "M4"): {"C"},
    ("P2", "M4"): {"C"},
    ("P3", "M4"): {"C"},
}

# (user_id, thread_id, class, timestamp); user1 never posts in threadM,
# user2 and userN never post in thread2
POST_ROWS = [
    ("user1", "thread1", "A", 1.0),
    ("user1", "thread1", "A", 2.0),
    ("user1", "thread1", "A", 3.0),
    ("user1", "thread2", "A", 4.0),
    ("user1", "thread2", "A", 7.0),
    ("user2", "thread1", "A", 8.0),
    ("user2", "threadM", "B", 13.0),
    ("userN", "thread1", "A", 5.0),
    ("userN", "thread1", "A", 10.0),
    ("userN", "threadM", "B", 2.0),
    ("userN", "threadM", "B", 7.0),
]


def _toy(with_topics_on_edges: bool):
    edge_attrs = {
        name: {"time": MEETING_TIMES[name], "class": Category(MEETING_CLASSES[name])}
        for name in MEETINGS
    }
    hypergraph = build_hypergraph(
        vertices=PEOPLE,
        edges=list(MEETINGS.values()),
        edge_attrs=edge_attrs,
        incidence_attrs={key: {"topics": FiniteSet(tuple(v))} for key, v in TOPICS.items()},
        edge_names=list(MEETINGS),
    )
    if not with_topics_on_edges:
        return hypergraph
    topics = marginalize_edges(hypergraph, "topics", Marginalizer.SET_UNION)
    for e, value in topics.items():
        edge_attrs[hypergraph.edge_names[e]]["topics"] = value
    return build_hypergraph(
        vertices=PEOPLE,
        edges=list(MEETINGS.values()),
        edge_attrs=edge_attrs,
        incidence_attrs={key: {"topics": FiniteSet(tuple(v))} for key, v in TOPICS.items()},
        edge_names=list(MEETINGS),
    )


@pytest.fixture
def toy_incidences():
    """Toy meetings with topics only on incidences."""
    return _toy(with_topics_on_edges=False)


@pytest.fixture
def toy():
    """Toy meetings with time, class and marginalized topics on every meeting."""
    return _toy(with_topics_on_edges=True)


@pytest.fixture
def post_rows():
    return list(POST_ROWS)


@pytest.fixture
def posts_csv(tmp_path):
    """The post rows written as a posts CSV."""
    path = tmp_path / "posts.csv"
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(POST_COLUMNS)
        writer.writerows(POST_ROWS)
    return path
