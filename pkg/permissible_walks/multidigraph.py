"""
Dynamic multi-digraphs as 2-uniform attributed hypergraphs.

Each timestamped arc becomes a two-member hyperedge carrying its direction
and timestamp. Chaining arcs (head of one is the tail of the next, in time
order) are then exactly the permissible walk graph obtained by intersecting
a direction predicate with a timestamp predicate on the 1-line graph.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, List, Sequence, Tuple, Union

from .attributes import DirectionChains, DirectionPair, Timestamp, TimestampLessEq
from .errors import EmptyData, MalformedRow, SelfLoopArc
from .hypergraph import AttributedHypergraph, build_hypergraph
from .ingest import unreadable_row
from .linegraph import (
    PermissibleWalkGraph,
    attributed_s_line_graph,
    intersect,
    permissible_walk_graph,
)

logger = logging.getLogger(__name__)

ARC_COLUMNS = ("source", "target", "timestamp")
DIRECTION_ATTR = "direction"
TIME_ATTR = "time"


@dataclass(frozen=True)
class TimedArc:
    source: str
    target: str
    timestamp: float


@dataclass(frozen=True)
class DynamicMultiDigraph:
    """Nodes plus an ordered list of timestamped arcs; arcs may repeat."""

    nodes: Tuple[str, ...]
    arcs: Tuple[TimedArc, ...]

    @classmethod
    def from_arcs(cls, arcs: Sequence[Tuple[str, str, float]]) -> "DynamicMultiDigraph":
        timed = tuple(TimedArc(str(s), str(t), float(ts)) for s, t, ts in arcs)
        nodes = tuple(dict.fromkeys(n for arc in timed for n in (arc.source, arc.target)))
        return cls(nodes=nodes, arcs=timed)


def to_hypergraph(graph: DynamicMultiDigraph) -> AttributedHypergraph:
    """
    One hyperedge ``{source, target}`` per arc, named ``a0, a1, ...``.

    Raises:
        SelfLoopArc: If an arc starts and ends at the same node.
        EmptyData: If there are no arcs.
    """
    if not graph.arcs:
        raise EmptyData("arc list")
    for arc in graph.arcs:
        if arc.source == arc.target:
            raise SelfLoopArc(arc.source, arc.timestamp)
    names = [f"a{i}" for i in range(len(graph.arcs))]
    return build_hypergraph(
        vertices=graph.nodes,
        edges=[(arc.source, arc.target) for arc in graph.arcs],
        edge_attrs={
            name: {
                DIRECTION_ATTR: DirectionPair(arc.source, arc.target),
                TIME_ATTR: Timestamp(arc.timestamp),
            }
            for name, arc in zip(names, graph.arcs)
        },
        edge_names=names,
    )


def chain_permissible_graph(graph: DynamicMultiDigraph) -> PermissibleWalkGraph:
    """Arcs linked when the first feeds the second no later than it happens."""
    line_graph = attributed_s_line_graph(to_hypergraph(graph), 1)
    by_direction = permissible_walk_graph(line_graph, DIRECTION_ATTR, DirectionChains())
    by_time = permissible_walk_graph(line_graph, TIME_ATTR, TimestampLessEq())
    return intersect(by_direction, by_time)


def chain_oracle(graph: DynamicMultiDigraph) -> FrozenSet[Tuple[int, int]]:
    """Direct double loop over arc pairs; reference for :func:`chain_permissible_graph`."""
    arcs = graph.arcs
    return frozenset(
        (i, j)
        for i, first in enumerate(arcs)
        for j, second in enumerate(arcs)
        if i != j and first.target == second.source and first.timestamp <= second.timestamp
    )


def read_arcs_csv(path: Union[str, Path]) -> DynamicMultiDigraph:
    """
    Read a ``source,target,timestamp`` CSV.

    Raises:
        EmptyData: If the file has no header or no arcs.
        MalformedRow: On a bad header or row.
    """
    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        try:
            arcs = _read_arcs(reader, path)
        except (UnicodeDecodeError, csv.Error) as e:
            raise unreadable_row(e, reader.line_num, path) from e
    if not arcs:
        raise EmptyData(str(path))
    logger.info("Read %d arcs from %s", len(arcs), path)
    return DynamicMultiDigraph.from_arcs(arcs)


def _read_arcs(reader: csv.DictReader, path: Union[str, Path]) -> List[Tuple[str, str, float]]:
    if reader.fieldnames is None:
        raise EmptyData(str(path))
    missing = [c for c in ARC_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise MalformedRow(1, f"header lacks {', '.join(missing)}", str(path))
    arcs: List[Tuple[str, str, float]] = []
    for line, row in enumerate(reader, start=2):
        values: Dict[str, str] = {c: (row.get(c) or "").strip() for c in ARC_COLUMNS}
        empty = [c for c, v in values.items() if not v]
        if empty:
            raise MalformedRow(line, f"missing {empty[0]}", str(path))
        try:
            stamp = float(values["timestamp"])
        except ValueError as e:
            raise MalformedRow(line, "timestamp is not a number", str(path)) from e
        if not math.isfinite(stamp):
            raise MalformedRow(line, "timestamp is not finite", str(path))
        arcs.append((values["source"], values["target"], stamp))
    return arcs
