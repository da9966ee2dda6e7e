"""
Attributed hypergraph data model.

Vertices and hyperedges are dense integer handles with unique display names.
The hyperedge family is indexed, so two hyperedges may share a member set.
Attributes live in three maps: per vertex, per hyperedge and per incidence.
"""

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from .attributes import Attributes, AttributeValue, decode_attributes, encode_attributes
from .errors import (
    DuplicateName,
    EmptyEdgeSet,
    EmptyVertexSet,
    InputError,
    NonIncidenceAttribute,
    UnknownVertexInEdge,
)

logger = logging.getLogger(__name__)

HYPERGRAPH_KIND = "hypergraph"


def _freeze(attrs: Mapping[Any, Mapping[str, AttributeValue]]) -> Mapping[Any, Attributes]:
    return MappingProxyType({key: MappingProxyType(dict(value)) for key, value in attrs.items()})


@dataclass(frozen=True)
class AttributedHypergraph:
    """
    Immutable attributed hypergraph.

    Use :func:`build_hypergraph` to construct one; it validates every
    invariant. ``incidence_attrs`` is keyed by ``(vertex_id, edge_id)``.
    """

    vertex_names: Tuple[str, ...]
    edge_names: Tuple[str, ...]
    edges: Tuple[FrozenSet[int], ...]
    vertex_attrs: Mapping[int, Attributes]
    edge_attrs: Mapping[int, Attributes]
    incidence_attrs: Mapping[Tuple[int, int], Attributes]

    def __post_init__(self) -> None:
        memberships: List[List[int]] = [[] for _ in self.vertex_names]
        for e, members in enumerate(self.edges):
            for v in members:
                memberships[v].append(e)
        object.__setattr__(
            self, "_memberships", tuple(frozenset(m) for m in memberships)
        )
        object.__setattr__(
            self, "_vertex_index", {name: i for i, name in enumerate(self.vertex_names)}
        )
        object.__setattr__(
            self, "_edge_index", {name: i for i, name in enumerate(self.edge_names)}
        )

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    @property
    def n_edges(self) -> int:
        return len(self.edge_names)

    @property
    def vertex_ids(self) -> range:
        return range(self.n_vertices)

    @property
    def edge_ids(self) -> range:
        return range(self.n_edges)

    def members(self, e: int) -> FrozenSet[int]:
        return self.edges[e]

    def memberships(self, v: int) -> FrozenSet[int]:
        """Hyperedges containing vertex ``v``."""
        return self._memberships[v]  # type: ignore[attr-defined]

    def vertex_id(self, name: str) -> int:
        try:
            return self._vertex_index[name]  # type: ignore[attr-defined]
        except KeyError as e:
            raise InputError(f"Unknown vertex {name!r}") from e

    def edge_id(self, name: str) -> int:
        try:
            return self._edge_index[name]  # type: ignore[attr-defined]
        except KeyError as e:
            raise InputError(f"Unknown hyperedge {name!r}") from e

    def incidences(self) -> Iterator[Tuple[int, int]]:
        """All (vertex, edge) pairs with the vertex a member of the edge."""
        for e, members in enumerate(self.edges):
            for v in sorted(members):
                yield v, e

    @property
    def n_incidences(self) -> int:
        return sum(len(members) for members in self.edges)

    def edge_sizes(self) -> List[int]:
        return [len(members) for members in self.edges]

    def degree(self, v: int) -> int:
        return len(self.memberships(v))

    def member_names(self, e: int) -> List[str]:
        return [self.vertex_names[v] for v in sorted(self.edges[e])]


def build_hypergraph(
    vertices: Sequence[str],
    edges: Sequence[Iterable[str]],
    vertex_attrs: Optional[Mapping[str, Mapping[str, AttributeValue]]] = None,
    edge_attrs: Optional[Mapping[str, Mapping[str, AttributeValue]]] = None,
    incidence_attrs: Optional[Mapping[Tuple[str, str], Mapping[str, AttributeValue]]] = None,
    edge_names: Optional[Sequence[str]] = None,
) -> AttributedHypergraph:
    """
    Build and validate an attributed hypergraph.

    Args:
        vertices: Vertex names; their order fixes the vertex ids.
        edges: Member names per hyperedge; their order fixes the edge ids.
        vertex_attrs: Named attributes per vertex name.
        edge_attrs: Named attributes per hyperedge name.
        incidence_attrs: Named attributes per (vertex name, hyperedge name).
        edge_names: Hyperedge names. Defaults to ``e0, e1, ...``.

    Returns:
        The validated hypergraph.

    Raises:
        EmptyVertexSet, EmptyEdgeSet, UnknownVertexInEdge,
        NonIncidenceAttribute, DuplicateName
    """
    vertex_names = tuple(str(v) for v in vertices)
    if not vertex_names:
        raise EmptyVertexSet()
    edge_list = [list(members) for members in edges]
    if not edge_list:
        raise EmptyEdgeSet()
    if edge_names is None:
        names = tuple(f"e{i}" for i in range(len(edge_list)))
    else:
        names = tuple(str(name) for name in edge_names)
        if len(names) != len(edge_list):
            raise InputError(
                f"Got {len(names)} hyperedge names for {len(edge_list)} hyperedges"
            )

    vertex_index: Dict[str, int] = {}
    for i, name in enumerate(vertex_names):
        if name in vertex_index:
            raise DuplicateName("vertex", name)
        vertex_index[name] = i
    edge_index: Dict[str, int] = {}
    for i, name in enumerate(names):
        if name in edge_index:
            raise DuplicateName("hyperedge", name)
        edge_index[name] = i

    member_sets: List[FrozenSet[int]] = []
    for name, members in zip(names, edge_list):
        ids = set()
        for member in members:
            member = str(member)
            if member not in vertex_index:
                raise UnknownVertexInEdge(member, name)
            ids.add(vertex_index[member])
        member_sets.append(frozenset(ids))

    v_attrs: Dict[int, Dict[str, AttributeValue]] = {}
    for name, attrs in (vertex_attrs or {}).items():
        if str(name) not in vertex_index:
            raise InputError(f"Attributes given for undeclared vertex {name!r}")
        v_attrs[vertex_index[str(name)]] = dict(attrs)

    e_attrs: Dict[int, Dict[str, AttributeValue]] = {}
    for name, attrs in (edge_attrs or {}).items():
        if str(name) not in edge_index:
            raise InputError(f"Attributes given for undeclared hyperedge {name!r}")
        e_attrs[edge_index[str(name)]] = dict(attrs)

    i_attrs: Dict[Tuple[int, int], Dict[str, AttributeValue]] = {}
    for (v_name, e_name), attrs in (incidence_attrs or {}).items():
        v = vertex_index.get(str(v_name))
        e = edge_index.get(str(e_name))
        if v is None or e is None or v not in member_sets[e]:
            raise NonIncidenceAttribute(v_name, e_name)
        i_attrs[(v, e)] = dict(attrs)

    hypergraph = AttributedHypergraph(
        vertex_names=vertex_names,
        edge_names=names,
        edges=tuple(member_sets),
        vertex_attrs=_freeze(v_attrs),
        edge_attrs=_freeze(e_attrs),
        incidence_attrs=_freeze(i_attrs),
    )
    logger.debug(
        "Built hypergraph with %d vertices, %d hyperedges, %d incidences",
        hypergraph.n_vertices,
        hypergraph.n_edges,
        hypergraph.n_incidences,
    )
    return hypergraph


def incidence_matrix(hypergraph: AttributedHypergraph) -> np.ndarray:
    """Boolean matrix with rows indexed by vertex id and columns by edge id."""
    matrix = np.zeros((hypergraph.n_vertices, hypergraph.n_edges), dtype=bool)
    for v, e in hypergraph.incidences():
        matrix[v, e] = True
    return matrix


def dual(hypergraph: AttributedHypergraph) -> AttributedHypergraph:
    """
    Transpose the incidence relation.

    Vertex ``i`` of the dual is hyperedge ``i`` of the input and hyperedge
    ``j`` of the dual is the set of hyperedges containing vertex ``j``.
    Attribute maps are swapped and incidence keys transposed.
    """
    return AttributedHypergraph(
        vertex_names=hypergraph.edge_names,
        edge_names=hypergraph.vertex_names,
        edges=tuple(hypergraph.memberships(v) for v in hypergraph.vertex_ids),
        vertex_attrs=hypergraph.edge_attrs,
        edge_attrs=hypergraph.vertex_attrs,
        incidence_attrs=MappingProxyType(
            {(e, v): attrs for (v, e), attrs in hypergraph.incidence_attrs.items()}
        ),
    )


def restrict_edges(hypergraph: AttributedHypergraph, min_size: int) -> AttributedHypergraph:
    """
    Keep only hyperedges with at least ``min_size`` members.

    Vertices are all kept; surviving hyperedges are renumbered in order.

    Raises:
        EmptyEdgeSet: If no hyperedge is large enough.
    """
    keep = [e for e in hypergraph.edge_ids if len(hypergraph.edges[e]) >= min_size]
    dropped = hypergraph.n_edges - len(keep)
    if dropped:
        logger.warning("Dropped %d hyperedges with fewer than %d members", dropped, min_size)
    if not keep:
        raise EmptyEdgeSet()
    renumber = {old: new for new, old in enumerate(keep)}
    return AttributedHypergraph(
        vertex_names=hypergraph.vertex_names,
        edge_names=tuple(hypergraph.edge_names[e] for e in keep),
        edges=tuple(hypergraph.edges[e] for e in keep),
        vertex_attrs=hypergraph.vertex_attrs,
        edge_attrs=MappingProxyType(
            {renumber[e]: a for e, a in hypergraph.edge_attrs.items() if e in renumber}
        ),
        incidence_attrs=MappingProxyType(
            {
                (v, renumber[e]): a
                for (v, e), a in hypergraph.incidence_attrs.items()
                if e in renumber
            }
        ),
    )


def hypergraph_to_dict(hypergraph: AttributedHypergraph) -> Dict[str, Any]:
    """Encode in the JSON hypergraph format."""
    vnames = hypergraph.vertex_names
    enames = hypergraph.edge_names
    return {
        "kind": HYPERGRAPH_KIND,
        "vertices": [
            {"id": vnames[v], "attrs": encode_attributes(hypergraph.vertex_attrs.get(v, {}))}
            for v in hypergraph.vertex_ids
        ],
        "edges": [
            {
                "id": enames[e],
                "members": hypergraph.member_names(e),
                "attrs": encode_attributes(hypergraph.edge_attrs.get(e, {})),
            }
            for e in hypergraph.edge_ids
        ],
        "incidences": [
            {
                "vertex": vnames[v],
                "edge": enames[e],
                "attrs": encode_attributes(hypergraph.incidence_attrs[(v, e)]),
            }
            for v, e in hypergraph.incidences()
            if (v, e) in hypergraph.incidence_attrs
        ],
    }


def hypergraph_from_dict(data: Mapping[str, Any]) -> AttributedHypergraph:
    """Decode the JSON hypergraph format."""
    try:
        vertices = [str(item["id"]) for item in data.get("vertices", [])]
        edges = list(data.get("edges", []))
        return build_hypergraph(
            vertices,
            [[str(m) for m in item.get("members", [])] for item in edges],
            vertex_attrs={
                str(item["id"]): decode_attributes(item.get("attrs"))
                for item in data.get("vertices", [])
                if item.get("attrs")
            },
            edge_attrs={
                str(item["id"]): decode_attributes(item.get("attrs"))
                for item in edges
                if item.get("attrs")
            },
            incidence_attrs={
                (str(item["vertex"]), str(item["edge"])): decode_attributes(item.get("attrs"))
                for item in data.get("incidences", [])
            },
            edge_names=[str(item["id"]) for item in edges],
        )
    except (KeyError, TypeError, AttributeError) as e:
        raise InputError(f"Malformed hypergraph document: {e}") from e
