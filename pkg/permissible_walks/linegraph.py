"""
s-line graphs, attributed line graphs, attribution graphs and permissible
walk graphs.

Nodes of every graph here are hyperedge ids of the source hypergraph. Directed
graphs never carry self-loops, so predicates are never evaluated on (e, e).
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import networkx as nx

from .attributes import Attributes, Predicate
from .errors import (
    InvalidParameter,
    MissingAttribute,
    MissingEdgeAttribute,
    NodeSetMismatch,
    UnknownNode,
)
from .hypergraph import AttributedHypergraph

logger = logging.getLogger(__name__)

Arc = Tuple[int, int]


@dataclass(frozen=True)
class SLineGraph:
    """Undirected s-line graph; ``pairs`` maps ``(i, j)`` with ``i < j`` to |e_i ∩ e_j|."""

    s: int
    node_names: Tuple[str, ...]
    pairs: Mapping[Arc, int]

    @property
    def nodes(self) -> range:
        return range(len(self.node_names))

    @property
    def edges(self) -> FrozenSet[Arc]:
        return frozenset(self.pairs)

    def named_edges(self) -> Set[FrozenSet[str]]:
        return {frozenset((self.node_names[i], self.node_names[j])) for i, j in self.pairs}


def _intersection_counts(hypergraph: AttributedHypergraph) -> Counter:
    # Inverted index: each vertex contributes one to every pair of its hyperedges.
    counts: Counter = Counter()
    for v in hypergraph.vertex_ids:
        for pair in combinations(sorted(hypergraph.memberships(v)), 2):
            counts[pair] += 1
    return counts


def s_line_graph(hypergraph: AttributedHypergraph, s: int) -> SLineGraph:
    """
    Build the s-line graph of a hypergraph.

    Two distinct hyperedges are adjacent iff they share at least ``s``
    vertices. ``s = 0`` yields the complete graph on hyperedges.

    Raises:
        InvalidParameter: If ``s`` is negative.
    """
    if isinstance(s, bool) or not isinstance(s, int) or s < 0:
        raise InvalidParameter("s", s, "must be a non-negative integer")
    counts = _intersection_counts(hypergraph)
    if s == 0:
        pairs = {pair: counts.get(pair, 0) for pair in combinations(hypergraph.edge_ids, 2)}
    else:
        pairs = {pair: size for pair, size in counts.items() if size >= s}
    logger.debug("%d-line graph: %d nodes, %d edges", s, hypergraph.n_edges, len(pairs))
    return SLineGraph(s=s, node_names=hypergraph.edge_names, pairs=MappingProxyType(pairs))


@dataclass(frozen=True)
class AttributedDigraph:
    """Directed graph on hyperedge ids with node attributes and intersection sizes."""

    nodes: Tuple[int, ...]
    node_names: Mapping[int, str]
    arcs: FrozenSet[Arc]
    tau: Mapping[int, Attributes]
    zeta: Mapping[Arc, int] = field(default_factory=dict)
    sizes: Mapping[int, int] = field(default_factory=dict)
    s: Optional[int] = None

    def __contains__(self, node: int) -> bool:
        return node in self.nodes

    def successors(self, node: int) -> List[int]:
        return sorted(b for a, b in self.arcs if a == node)

    def node_by_name(self, name: str) -> int:
        for node, node_name in self.node_names.items():
            if node_name == name:
                return node
        raise UnknownNode(name)

    def named_arcs(self) -> Set[Tuple[str, str]]:
        return {(self.node_names[a], self.node_names[b]) for a, b in self.arcs}

    def to_networkx(self) -> nx.DiGraph:
        """Export as a ``networkx.DiGraph`` keyed by node id."""
        graph = nx.DiGraph(s=self.s)
        for node in self.nodes:
            graph.add_node(
                node,
                name=self.node_names[node],
                size=self.sizes.get(node, 0),
                attrs=dict(self.tau.get(node, {})),
            )
        for arc in sorted(self.arcs):
            graph.add_edge(*arc, intersection=self.zeta.get(arc))
        return graph

    def _replace(self, cls: type, arcs: Iterable[Arc], **changes) -> "AttributedDigraph":
        arcs = frozenset(arcs)
        fields = dict(
            nodes=self.nodes,
            node_names=self.node_names,
            arcs=arcs,
            tau=self.tau,
            zeta=MappingProxyType({a: z for a, z in self.zeta.items() if a in arcs}),
            sizes=self.sizes,
            s=self.s,
        )
        fields.update(changes)
        return cls(**fields)


class AttributedLineGraph(AttributedDigraph):
    """Bidirected s-line graph carrying hyperedge attributes on its nodes."""


class AttributionGraph(AttributedDigraph):
    """Every ordered pair of distinct nodes whose attributes satisfy a predicate."""


class PermissibleWalkGraph(AttributedDigraph):
    """Spanning subgraph of an attributed line graph selected by a predicate."""


def attributed_s_line_graph(
    hypergraph: AttributedHypergraph, s: int, attr_names: Optional[Sequence[str]] = None
) -> AttributedLineGraph:
    """
    Build the attributed s-line graph.

    Node attributes are the hyperedge attributes named in ``attr_names``
    (all of them when ``None``); ``zeta`` holds intersection sizes in both
    directions.

    Raises:
        MissingAttribute: If a hyperedge lacks one of ``attr_names``.
    """
    line_graph = s_line_graph(hypergraph, s)
    tau: Dict[int, Attributes] = {}
    for e in hypergraph.edge_ids:
        attrs = hypergraph.edge_attrs.get(e, {})
        if attr_names is None:
            tau[e] = MappingProxyType(dict(attrs))
            continue
        for name in attr_names:
            if name not in attrs:
                raise MissingAttribute(hypergraph.edge_names[e], name)
        tau[e] = MappingProxyType({name: attrs[name] for name in attr_names})

    zeta: Dict[Arc, int] = {}
    for (i, j), size in line_graph.pairs.items():
        zeta[(i, j)] = size
        zeta[(j, i)] = size
    return AttributedLineGraph(
        nodes=tuple(hypergraph.edge_ids),
        node_names=MappingProxyType(dict(enumerate(hypergraph.edge_names))),
        arcs=frozenset(zeta),
        tau=MappingProxyType(tau),
        zeta=MappingProxyType(zeta),
        sizes=MappingProxyType(dict(enumerate(hypergraph.edge_sizes()))),
        s=s,
    )


def _check_attributes(
    nodes: Iterable[int],
    tau: Mapping[int, Attributes],
    names: Sequence[str],
    node_names: Optional[Mapping[int, str]] = None,
) -> None:
    for node in nodes:
        attrs = tau.get(node, {})
        for name in names:
            if name not in attrs:
                owner = node_names[node] if node_names else node
                raise MissingAttribute(owner, name)


def attribution_graph(
    nodes: Sequence[int],
    tau: Mapping[int, Attributes],
    attr_name: Optional[str],
    predicate: Predicate,
    node_names: Optional[Mapping[int, str]] = None,
) -> AttributionGraph:
    """
    Filter the complete directed graph on ``nodes`` by ``predicate``.

    Raises:
        MissingAttribute: If a node lacks an attribute the predicate reads.
        KindMismatch: Propagated from the predicate.
    """
    _check_attributes(nodes, tau, predicate.required_attributes(attr_name), node_names)
    arcs = frozenset(
        (a, b)
        for a in nodes
        for b in nodes
        if a != b and predicate.holds(tau[a], tau[b], attr_name)
    )
    return AttributionGraph(
        nodes=tuple(nodes),
        node_names=MappingProxyType(dict(node_names or {n: str(n) for n in nodes})),
        arcs=arcs,
        tau=tau,
    )


def permissible_walk_graph(
    line_graph: AttributedDigraph, attr_name: Optional[str], predicate: Predicate
) -> PermissibleWalkGraph:
    """
    Keep the arcs of ``line_graph`` whose ordered endpoints satisfy ``predicate``.

    ``attr_name`` is ignored by conjunctions, which name their own attributes.

    Raises:
        MissingAttribute: If a node lacks an attribute the predicate reads.
        KindMismatch: Propagated from the predicate.
    """
    _check_attributes(
        line_graph.nodes,
        line_graph.tau,
        predicate.required_attributes(attr_name),
        line_graph.node_names,
    )
    tau = line_graph.tau
    kept = [(a, b) for a, b in line_graph.arcs if predicate.holds(tau[a], tau[b], attr_name)]
    logger.debug(
        "Predicate %s on %s kept %d of %d arcs",
        predicate.spec,
        attr_name,
        len(kept),
        len(line_graph.arcs),
    )
    return line_graph._replace(PermissibleWalkGraph, kept)  # type: ignore[return-value]


def intersect(first: AttributedDigraph, second: AttributedDigraph) -> PermissibleWalkGraph:
    """
    Intersect the arc sets of two graphs on the same nodes.

    Node attributes of both operands are merged.

    Raises:
        NodeSetMismatch: If the node sets differ.
    """
    if set(first.nodes) != set(second.nodes):
        raise NodeSetMismatch()
    tau = MappingProxyType(
        {
            node: MappingProxyType({**second.tau.get(node, {}), **first.tau.get(node, {})})
            for node in first.nodes
        }
    )
    zeta = {**second.zeta, **first.zeta}
    arcs = first.arcs & second.arcs
    return PermissibleWalkGraph(
        nodes=first.nodes,
        node_names=first.node_names,
        arcs=arcs,
        tau=tau,
        zeta=MappingProxyType({a: zeta[a] for a in arcs if a in zeta}),
        sizes=first.sizes or second.sizes,
        s=first.s if first.s is not None else second.s,
    )


def apply_predicates(
    line_graph: AttributedLineGraph, clauses: Sequence[Tuple[Optional[str], Predicate]]
) -> PermissibleWalkGraph:
    """Intersect the permissible walk graphs of several (attribute, predicate) clauses."""
    if not clauses:
        return line_graph._replace(PermissibleWalkGraph, line_graph.arcs)  # type: ignore[return-value]
    graphs = [permissible_walk_graph(line_graph, attr, pred) for attr, pred in clauses]
    result = graphs[0]
    for graph in graphs[1:]:
        result = intersect(result, graph)
    return result


def s_line_as_permissible(line_graph: AttributedDigraph, s: int) -> PermissibleWalkGraph:
    """
    Recover the s-line graph from a 1-line graph by thresholding intersection sizes.

    Raises:
        MissingEdgeAttribute: If an arc has no intersection size.
        InvalidParameter: If ``s`` is below 1.
    """
    if isinstance(s, bool) or not isinstance(s, int) or s < 1:
        raise InvalidParameter("s", s, "must be at least 1 to threshold a 1-line graph")
    for a, b in line_graph.arcs:
        if (a, b) not in line_graph.zeta:
            raise MissingEdgeAttribute(
                line_graph.node_names[a], line_graph.node_names[b], "intersection"
            )
    kept = [arc for arc in line_graph.arcs if line_graph.zeta[arc] >= s]
    return line_graph._replace(PermissibleWalkGraph, kept, s=s)  # type: ignore[return-value]
