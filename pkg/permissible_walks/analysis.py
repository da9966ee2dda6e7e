"""
Downstream analytics on permissible walk graphs.

Interaction matrices and class graphs summarize traffic between node
classes; components and downstream sets describe reach; traces count
active intervals over time.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from types import MappingProxyType
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import networkx as nx
import numpy as np

from .attributes import Category, Interval, Predicate, hull
from .errors import (
    EmptyCollection,
    InputError,
    InvalidParameter,
    SampleOutsideSupport,
    UnknownNode,
    UnlabeledNode,
)
from .hypergraph import AttributedHypergraph
from .linegraph import (
    AttributedDigraph,
    PermissibleWalkGraph,
    apply_predicates,
    attributed_s_line_graph,
)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 2000


@dataclass(frozen=True, eq=False)
class InteractionMatrix:
    """Counts of directed edges from class ``labels[i]`` to class ``labels[j]``."""

    labels: Tuple[str, ...]
    counts: np.ndarray

    def __getitem__(self, key: Tuple[str, str]) -> int:
        source, target = key
        return int(self.counts[self.labels.index(source), self.labels.index(target)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InteractionMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.counts, other.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def cross_class(self) -> int:
        return self.total - int(np.trace(self.counts))

    def to_rows(self) -> List[List[int]]:
        return self.counts.tolist()


def classes_from_attribute(graph: AttributedDigraph, attr_name: str) -> Dict[int, str]:
    """Read a class label per node from a node attribute."""
    labels: Dict[int, str] = {}
    for node in graph.nodes:
        value = graph.tau.get(node, {}).get(attr_name)
        if value is None:
            raise UnlabeledNode(graph.node_names[node])
        labels[node] = value.label if isinstance(value, Category) else str(value)
    return labels


def interaction_matrix(
    graph: AttributedDigraph,
    class_of: Mapping[int, str],
    labels: Optional[Sequence[str]] = None,
) -> InteractionMatrix:
    """
    Count directed edges between node classes.

    Args:
        graph: The analyzed graph.
        class_of: Class label per node id; must cover every node.
        labels: Row/column order. Defaults to the sorted labels in use.

    Raises:
        UnlabeledNode: If a node has no label, or a label outside ``labels``.
    """
    for node in graph.nodes:
        if node not in class_of:
            raise UnlabeledNode(graph.node_names[node])
    if labels is None:
        labels = sorted({class_of[node] for node in graph.nodes})
    order = {label: i for i, label in enumerate(labels)}
    for node in graph.nodes:
        if class_of[node] not in order:
            raise UnlabeledNode(graph.node_names[node])

    counts = np.zeros((len(order), len(order)), dtype=np.int64)
    if graph.arcs:
        rows, cols = zip(*((order[class_of[a]], order[class_of[b]]) for a, b in graph.arcs))
        np.add.at(counts, (np.array(rows), np.array(cols)), 1)
    return InteractionMatrix(labels=tuple(labels), counts=counts)


def class_graph(matrix: InteractionMatrix) -> nx.DiGraph:
    """Weighted class digraph whose adjacency is the interaction matrix."""
    graph = nx.DiGraph()
    graph.add_nodes_from(matrix.labels)
    for i, source in enumerate(matrix.labels):
        for j, target in enumerate(matrix.labels):
            weight = int(matrix.counts[i, j])
            if weight:
                graph.add_edge(source, target, weight=weight)
    return graph


@dataclass(frozen=True)
class Component:
    nodes: Tuple[int, ...]
    members: Tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.nodes)


def weakly_connected_components(graph: AttributedDigraph) -> List[Component]:
    """Weak components, largest first (ties broken by smallest node id)."""
    nx_graph = nx.DiGraph()
    nx_graph.add_nodes_from(graph.nodes)
    nx_graph.add_edges_from(graph.arcs)
    components = [tuple(sorted(c)) for c in nx.weakly_connected_components(nx_graph)]
    components.sort(key=lambda nodes: (-len(nodes), nodes[0]))
    return [
        Component(nodes=nodes, members=tuple(graph.node_names[n] for n in nodes))
        for nodes in components
    ]


def component_composition(
    graph: AttributedDigraph, class_of: Mapping[int, str]
) -> List[Dict[str, int]]:
    """Class histogram of each weak component, in component order."""
    compositions = []
    for component in weakly_connected_components(graph):
        missing = [n for n in component.nodes if n not in class_of]
        if missing:
            raise UnlabeledNode(graph.node_names[missing[0]])
        compositions.append(dict(sorted(Counter(class_of[n] for n in component.nodes).items())))
    return compositions


def _digraph(graph: AttributedDigraph, node: int) -> nx.DiGraph:
    if node not in graph:
        raise UnknownNode(node)
    nx_graph = nx.DiGraph()
    nx_graph.add_nodes_from(graph.nodes)
    nx_graph.add_edges_from(graph.arcs)
    return nx_graph


def downstream_neighbors(graph: AttributedDigraph, node: int) -> Set[int]:
    """Out-neighbors of ``node``."""
    return set(_digraph(graph, node).successors(node))


def downstream_reachable(graph: AttributedDigraph, node: int) -> Set[int]:
    """
    Nodes reachable from ``node`` by a directed path of length at least one.

    ``node`` itself is included only when a directed cycle returns to it.
    """
    nx_graph = _digraph(graph, node)
    reachable = nx.descendants(nx_graph, node)
    if any(pred in reachable for pred in nx_graph.predecessors(node)):
        reachable.add(node)
    return reachable


def remove_isolated(graph: AttributedDigraph) -> Tuple[PermissibleWalkGraph, int]:
    """Drop nodes with no incident arcs; returns the new graph and how many went."""
    touched = {n for arc in graph.arcs for n in arc}
    kept = tuple(n for n in graph.nodes if n in touched)
    removed = len(graph.nodes) - len(kept)
    logger.info("Removed %d isolated nodes", removed)
    result = PermissibleWalkGraph(
        nodes=kept,
        node_names=MappingProxyType({n: graph.node_names[n] for n in kept}),
        arcs=graph.arcs,
        tau=MappingProxyType({n: graph.tau[n] for n in kept if n in graph.tau}),
        zeta=graph.zeta,
        sizes=MappingProxyType({n: graph.sizes[n] for n in kept if n in graph.sizes}),
        s=graph.s,
    )
    return result, removed


@dataclass(frozen=True)
class Trace:
    """Active-interval counter over a collection of closed intervals."""

    intervals: Tuple[Interval, ...]

    def __post_init__(self) -> None:
        if not self.intervals:
            raise EmptyCollection()
        object.__setattr__(self, "_starts", np.sort([i.lo for i in self.intervals]))
        object.__setattr__(self, "_ends", np.sort([i.hi for i in self.intervals]))

    @property
    def support(self) -> Interval:
        return hull(self.intervals)

    def counts(self, points: Sequence[float]) -> np.ndarray:
        """Active counts at ``points`` without support checks."""
        points = np.asarray(points, dtype=float)
        started = np.searchsorted(self._starts, points, side="right")  # type: ignore[attr-defined]
        ended = np.searchsorted(self._ends, points, side="left")  # type: ignore[attr-defined]
        return started - ended

    def __call__(self, t: float) -> int:
        return int(self.evaluate([t])[0])

    def evaluate(self, points: Sequence[float]) -> np.ndarray:
        """
        Active counts at ``points``.

        Raises:
            SampleOutsideSupport: If a point lies outside the support hull.
        """
        support = self.support
        for t in points:
            if not support.contains(t):
                raise SampleOutsideSupport(t, support.lo, support.hi)
        return self.counts(points)


def sample_points(support: Interval, samples: int) -> np.ndarray:
    """``samples`` evenly spaced points spanning ``support``."""
    if isinstance(samples, bool) or not isinstance(samples, (int, np.integer)) or samples < 1:
        raise InvalidParameter("samples", samples, "must be a positive integer")
    return np.linspace(support.lo, support.hi, int(samples))


def trace(
    intervals: Iterable[Interval], samples: Union[int, Sequence[float]] = DEFAULT_SAMPLES
) -> List[Tuple[float, int]]:
    """
    Evaluate the trace of an interval collection.

    Args:
        intervals: Closed intervals.
        samples: Either a count of evenly spaced points over the support, or
            explicit sample points.

    Raises:
        EmptyCollection: If there are no intervals.
        SampleOutsideSupport: If an explicit sample lies outside the support.
    """
    evaluator = Trace(tuple(intervals))
    if isinstance(samples, (int, np.integer)) and not isinstance(samples, bool):
        points = sample_points(evaluator.support, samples)
    else:
        points = np.asarray(list(samples), dtype=float)
    values = evaluator.evaluate(points)
    return [(float(t), int(n)) for t, n in zip(points, values)]


def trace_by_class(
    intervals_by_label: Mapping[str, Sequence[Interval]], samples: int = DEFAULT_SAMPLES
) -> Dict[str, List[Tuple[float, int]]]:
    """One trace per class, all sampled on the support of the union."""
    everything = [i for intervals in intervals_by_label.values() for i in intervals]
    if not everything:
        raise EmptyCollection()
    points = sample_points(hull(everything), samples)
    result = {}
    for label, intervals in sorted(intervals_by_label.items()):
        if intervals:
            values = Trace(tuple(intervals)).counts(points)
        else:
            values = np.zeros(len(points), dtype=np.int64)
        result[label] = [(float(t), int(n)) for t, n in zip(points, values)]
    return result


def edge_intervals(graph: AttributedDigraph, attr_name: str) -> Dict[int, Interval]:
    """Interval attribute of every node that carries one."""
    result = {}
    for node in graph.nodes:
        value = graph.tau.get(node, {}).get(attr_name)
        if value is None:
            continue
        if not isinstance(value, Interval):
            raise InputError(f"Attribute {attr_name!r} of {graph.node_names[node]!r} is not an interval")
        result[node] = value
    return result


@dataclass(frozen=True)
class SweepPoint:
    s: int
    matrix: InteractionMatrix
    component_sizes: Tuple[int, ...]

    @property
    def cross_class(self) -> int:
        return self.matrix.cross_class


def s_sweep(
    hypergraph: AttributedHypergraph,
    s_values: Iterable[int],
    clauses: Sequence[Tuple[Optional[str], Predicate]],
    class_attr: str,
    on_step: Optional[Callable[[int], None]] = None,
) -> List[SweepPoint]:
    """
    Rebuild the permissible walk graph for each s and summarize it.

    Labels are fixed across the sweep so the matrices line up.
    """
    points = []
    labels: Optional[List[str]] = None
    for s in s_values:
        line_graph = attributed_s_line_graph(hypergraph, s)
        graph = apply_predicates(line_graph, clauses)
        class_of = classes_from_attribute(graph, class_attr)
        if labels is None:
            labels = sorted(set(class_of.values()))
        matrix = interaction_matrix(graph, class_of, labels)
        sizes = tuple(c.size for c in weakly_connected_components(graph))
        points.append(SweepPoint(s=s, matrix=matrix, component_sizes=sizes))
        logger.info("s=%d: %d edges, %d components", s, matrix.total, len(sizes))
        if on_step is not None:
            on_step(s)
    return points
