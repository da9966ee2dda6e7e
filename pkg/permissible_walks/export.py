"""
Report writer for permissible-walks.
Renders DOT through Jinja2 templates and writes the JSON and CSV reports.
"""

import csv
import json
import math
from pathlib import Path
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import jinja2
import networkx as nx

from .analysis import Component, InteractionMatrix, SweepPoint
from .attributes import decode_attributes, encode_attributes
from .errors import InputError
from .hypergraph import HYPERGRAPH_KIND
from .linegraph import AttributedDigraph, PermissibleWalkGraph

GRAPH_KIND = "permissible-walk-graph"

PathLike = Union[str, Path]


def _dot_escape(value: Any) -> str:
    return str(value).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


class ReportWriter:
    """Renders graph drawings and writes analysis reports."""

    TEMPLATES = {
        "permissible": "permissible_graph.dot.j2",
        "class": "class_graph.dot.j2",
    }

    def __init__(self) -> None:
        """Initialize the template environment."""
        self._templates_dir = Path(__file__).parent / "templates"
        self._env = jinja2.Environment(
            loader=jinja2.FileSystemLoader(self._templates_dir),
            autoescape=False,
            trim_blocks=True,
            lstrip_blocks=True,
            undefined=jinja2.StrictUndefined,
        )
        self._env.filters["dot"] = _dot_escape

    def render_graph_dot(self, graph: AttributedDigraph, title: str = "permissible") -> str:
        """
        Render a directed graph on hyperedges as DOT.

        Node width grows with hyperedge size, node tooltips carry the node
        attributes and edge pen width is the intersection size.

        Args:
            graph: Line graph or permissible walk graph.
            title: Graph name and label.

        Returns:
            DOT source.
        """
        nodes = []
        for node in graph.nodes:
            attrs = graph.tau.get(node, {})
            size = graph.sizes.get(node, 0)
            tooltip = "; ".join(f"{name}={value}" for name, value in sorted(attrs.items()))
            nodes.append(
                {
                    "name": graph.node_names[node],
                    "width": round(0.4 + 0.1 * math.sqrt(size), 3),
                    "tooltip": tooltip,
                }
            )
        edges = [
            {
                "source": graph.node_names[a],
                "target": graph.node_names[b],
                "penwidth": graph.zeta.get((a, b), 1),
            }
            for a, b in sorted(graph.arcs)
        ]
        template = self._env.get_template(self.TEMPLATES["permissible"])
        return template.render(title=title, nodes=nodes, edges=edges)

    def render_class_graph_dot(self, graph: nx.DiGraph, title: str = "classes") -> str:
        """Render a weighted class graph (see :func:`class_graph`) as DOT."""
        weights = list(graph.edges(data="weight", default=1))
        peak = max((int(w) for _, _, w in weights), default=1)
        edges = [
            {
                "source": source,
                "target": target,
                "weight": int(weight),
                "penwidth": round(1 + 4 * int(weight) / peak, 3),
            }
            for source, target, weight in weights
        ]
        template = self._env.get_template(self.TEMPLATES["class"])
        return template.render(title=title, labels=list(graph.nodes), edges=edges)

    def write_text(self, path: PathLike, text: str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path

    def write_json(self, path: PathLike, document: Any) -> Path:
        return self.write_text(path, json.dumps(document, indent=2, sort_keys=False) + "\n")

    def write_interaction_csv(self, path: PathLike, matrix: InteractionMatrix) -> Path:
        """Header row of class labels, then one row of counts per class."""
        return self._write_csv(path, [list(matrix.labels)] + matrix.to_rows())

    def write_trace_csv(self, path: PathLike, samples: Sequence[Tuple[float, int]]) -> Path:
        return self._write_csv(path, [["t", "T"]] + [[repr(t), n] for t, n in samples])

    def write_class_traces_csv(
        self, path: PathLike, traces: Mapping[str, Sequence[Tuple[float, int]]]
    ) -> Path:
        labels = sorted(traces)
        rows: List[List[Any]] = [["t"] + labels]
        if labels:
            for k, (t, _) in enumerate(traces[labels[0]]):
                rows.append([repr(t)] + [traces[label][k][1] for label in labels])
        return self._write_csv(path, rows)

    def write_sweep_csv(self, path: PathLike, points: Sequence[SweepPoint]) -> Path:
        labels = points[0].matrix.labels if points else ()
        pairs = [(a, b) for a in labels for b in labels]
        rows: List[List[Any]] = [
            ["s", "edges", "cross_class", "components", "largest_component"]
            + [f"{a}->{b}" for a, b in pairs]
        ]
        for point in points:
            rows.append(
                [
                    point.s,
                    point.matrix.total,
                    point.cross_class,
                    len(point.component_sizes),
                    point.component_sizes[0] if point.component_sizes else 0,
                ]
                + [point.matrix[a, b] for a, b in pairs]
            )
        return self._write_csv(path, rows)

    def _write_csv(self, path: PathLike, rows: Sequence[Sequence[Any]]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            csv.writer(f, lineterminator="\n").writerows(rows)
        return path


def components_to_list(
    components: Sequence[Component], compositions: Optional[Sequence[Mapping[str, int]]] = None
) -> List[Dict[str, Any]]:
    report = []
    for k, component in enumerate(components):
        entry: Dict[str, Any] = {"size": component.size, "members": list(component.members)}
        if compositions is not None:
            entry["classes"] = dict(compositions[k])
        report.append(entry)
    return report


def graph_to_dict(graph: AttributedDigraph) -> Dict[str, Any]:
    """Encode a directed graph on hyperedges in the JSON graph format."""
    names = graph.node_names
    return {
        "kind": GRAPH_KIND,
        "s": graph.s,
        "nodes": [
            {
                "id": names[node],
                "size": graph.sizes.get(node, 0),
                "attrs": encode_attributes(graph.tau.get(node, {})),
            }
            for node in graph.nodes
        ],
        "edges": [
            {
                "source": names[a],
                "target": names[b],
                "attrs": {"intersection": graph.zeta[(a, b)]} if (a, b) in graph.zeta else {},
            }
            for a, b in sorted(graph.arcs)
        ],
    }


def graph_from_dict(data: Mapping[str, Any]) -> PermissibleWalkGraph:
    """Decode the JSON graph format; node ids follow document order."""
    try:
        names = [str(item["id"]) for item in data["nodes"]]
        index = {name: i for i, name in enumerate(names)}
        if len(index) != len(names):
            raise InputError("Duplicate node ids in graph document")
        arcs = {}
        for item in data.get("edges", []):
            arc = (index[str(item["source"])], index[str(item["target"])])
            if arc[0] == arc[1]:
                raise InputError(f"Self-loop on {item['source']!r} in graph document")
            arcs[arc] = (item.get("attrs") or {}).get("intersection")
        return PermissibleWalkGraph(
            nodes=tuple(range(len(names))),
            node_names=MappingProxyType(dict(enumerate(names))),
            arcs=frozenset(arcs),
            tau=MappingProxyType(
                {
                    i: MappingProxyType(decode_attributes(item.get("attrs")))
                    for i, item in enumerate(data["nodes"])
                }
            ),
            zeta=MappingProxyType({a: int(z) for a, z in arcs.items() if z is not None}),
            sizes=MappingProxyType(
                {i: int(item.get("size", 0)) for i, item in enumerate(data["nodes"])}
            ),
            s=data.get("s"),
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"Malformed graph document: {e}") from e


def load_document(path: PathLike) -> Tuple[str, Dict[str, Any]]:
    """Read a JSON document and report whether it is a hypergraph or a graph."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}: invalid JSON ({e.msg})") from e
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: not valid UTF-8 text") from e
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    kind = data.get("kind")
    if kind is None:
        kind = HYPERGRAPH_KIND if "incidences" in data or "vertices" in data else GRAPH_KIND
    if kind not in (HYPERGRAPH_KIND, GRAPH_KIND):
        raise InputError(f"{path}: unknown document kind {kind!r}")
    return kind, data
