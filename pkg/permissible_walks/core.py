"""
Core module for permissible-walks.
Orchestrates ingestion, construction and analysis into file-producing pipelines.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from .analysis import (
    InteractionMatrix,
    class_graph,
    classes_from_attribute,
    component_composition,
    downstream_neighbors,
    downstream_reachable,
    edge_intervals,
    interaction_matrix,
    remove_isolated,
    s_sweep,
    trace,
    trace_by_class,
    weakly_connected_components,
)
from .config import PipelineConfig, config
from .errors import EmptyData, InputError, InvalidParameter, UnlabeledNode
from .export import (
    GRAPH_KIND,
    ReportWriter,
    components_to_list,
    graph_from_dict,
    graph_to_dict,
    load_document,
)
from .hypergraph import (
    HYPERGRAPH_KIND,
    AttributedHypergraph,
    hypergraph_from_dict,
    hypergraph_to_dict,
    restrict_edges,
)
from .ingest import (
    hypergraph_from_posts,
    read_posts_csv,
    synth_migration,
    unreadable_row,
    write_posts_csv,
)
from .linegraph import AttributedDigraph, apply_predicates, attributed_s_line_graph
from .multidigraph import read_arcs_csv, to_hypergraph

logger = logging.getLogger(__name__)

FORMATS = ("posts-csv", "hypergraph-json", "arcs-csv")
ANALYSIS_MODES = ("interaction", "components", "downstream", "trace")

PathLike = Union[str, Path]


def detect_format(path: PathLike) -> str:
    """Guess the input format from the extension and, for CSV, the header."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return "hypergraph-json"
    try:
        with open(path, "r", encoding="utf-8") as f:
            header = f.readline().strip().split(",")
    except UnicodeDecodeError as e:
        raise unreadable_row(e, 0, path) from e
    if not header or header == [""]:
        raise EmptyData(str(path))
    if "user_id" in header:
        return "posts-csv"
    if "source" in header and "target" in header:
        return "arcs-csv"
    raise InputError(f"{path}: cannot tell the input format from header {header!r}")


def output_path(out: PathLike, suffix: str, replace: Tuple[str, ...] = ()) -> Path:
    """
    Append ``suffix`` to ``out``.

    A trailing suffix listed in ``replace`` is dropped first, so ``walks.json``
    and ``walks`` both give ``walks.dot`` while ``walks.v2`` gives ``walks.v2.dot``.
    """
    out = Path(out)
    stem = out.with_suffix("") if out.suffix.lower() in replace else out
    return stem.with_name(stem.name + suffix)


class WalkPipeline:
    """Main class for permissible-walks pipelines."""

    def __init__(self, console: Optional[Console] = None, writer: Optional[ReportWriter] = None):
        """
        Initialize the pipeline.

        Args:
            console: Console for summaries. Defaults to a new rich console.
            writer: Report writer. Defaults to one using the bundled templates.
        """
        self.console = console or Console()
        self.writer = writer or ReportWriter()

    def load_hypergraph(
        self,
        path: PathLike,
        fmt: Optional[str] = None,
        window: Optional[Tuple[Optional[float], Optional[float]]] = None,
    ) -> AttributedHypergraph:
        """
        Read a hypergraph from any supported input format.

        Args:
            path: Input file.
            fmt: One of ``FORMATS``; detected when ``None``.
            window: Closed time window applied to posts input.
        """
        fmt = fmt or detect_format(path)
        if fmt not in FORMATS:
            raise InvalidParameter("format", fmt, f"must be one of {', '.join(FORMATS)}")
        if fmt == "posts-csv":
            start, end = window or (None, None)
            return hypergraph_from_posts(
                read_posts_csv(path, start=start, end=end),
                time_attr=config.get("time_attr"),
                class_attr=config.get("class_attr"),
            )
        if fmt == "arcs-csv":
            return to_hypergraph(read_arcs_csv(path))
        kind, data = load_document(path)
        if kind != HYPERGRAPH_KIND:
            raise InputError(f"{path}: expected a hypergraph document, got {kind!r}")
        return hypergraph_from_dict(data)

    def build(
        self,
        input_path: PathLike,
        out: PathLike,
        fmt: Optional[str] = None,
        window: Optional[Tuple[Optional[float], Optional[float]]] = None,
    ) -> Dict[str, Any]:
        """
        Validate an input and write it as hypergraph JSON.

        Returns:
            Dictionary with the summary counts and output path.
        """
        with self.console.status(f"Reading {input_path}..."):
            hypergraph = self.load_hypergraph(input_path, fmt, window)
        path = self.writer.write_json(out, hypergraph_to_dict(hypergraph))
        self.console.print(
            f"|V|=[bold]{hypergraph.n_vertices}[/bold] "
            f"|E|=[bold]{hypergraph.n_edges}[/bold] "
            f"incidences=[bold]{hypergraph.n_incidences}[/bold] -> {path}"
        )
        return {
            "success": True,
            "vertices": hypergraph.n_vertices,
            "edges": hypergraph.n_edges,
            "incidences": hypergraph.n_incidences,
            "output": str(path),
        }

    def construct(
        self, hypergraph: AttributedHypergraph, pipeline: PipelineConfig
    ) -> Tuple[AttributedDigraph, int]:
        """
        Build the permissible walk graph described by ``pipeline``.

        Returns:
            The graph and the number of isolated nodes removed.
        """
        if pipeline.min_edge_size:
            before = hypergraph.n_edges
            hypergraph = restrict_edges(hypergraph, pipeline.min_edge_size)
            self.console.print(
                f"Kept [bold]{hypergraph.n_edges}[/bold] of {before} hyperedges "
                f"with at least {pipeline.min_edge_size} members"
            )
        if pipeline.s == 0:
            logger.warning("s=0 builds the complete graph on %d hyperedges", hypergraph.n_edges)
            self.console.print(
                "[bold yellow]Warning:[/bold yellow] s=0 yields a complete line graph "
                f"({hypergraph.n_edges * (hypergraph.n_edges - 1)} directed edges)"
            )
        line_graph = attributed_s_line_graph(hypergraph, pipeline.s)
        graph: AttributedDigraph = apply_predicates(line_graph, pipeline.clauses)
        removed = 0
        if pipeline.drop_isolated:
            graph, removed = remove_isolated(graph)
        return graph, removed

    def permissible(
        self, input_path: PathLike, pipeline: PipelineConfig, out: PathLike
    ) -> Dict[str, Any]:
        """
        Build a permissible walk graph and write ``<out>.json`` and ``<out>.dot``.

        Returns:
            Dictionary with node/edge counts, removed count and output paths.
        """
        hypergraph = self.load_hypergraph(input_path)
        with self.console.status(f"Building the {pipeline.s}-line graph..."):
            graph, removed = self.construct(hypergraph, pipeline)
        json_path = self.writer.write_json(
            output_path(out, ".json", replace=(".json", ".dot")), graph_to_dict(graph)
        )
        title = " & ".join(f"{a or ''}:{p.spec}" for a, p in pipeline.clauses) or f"L{pipeline.s}"
        dot_path = self.writer.write_text(
            output_path(out, ".dot", replace=(".json", ".dot")),
            self.writer.render_graph_dot(graph, title=title),
        )
        self.console.print(
            f"Permissible walk graph: [bold]{len(graph.nodes)}[/bold] nodes, "
            f"[bold]{len(graph.arcs)}[/bold] edges -> {json_path}, {dot_path}"
        )
        if pipeline.drop_isolated:
            self.console.print(f"Removed [bold]{removed}[/bold] isolated nodes")
        return {
            "success": True,
            "nodes": len(graph.nodes),
            "edges": len(graph.arcs),
            "removed_isolated": removed,
            "outputs": [str(json_path), str(dot_path)],
        }

    def _load_graph(
        self, path: PathLike, pipeline: PipelineConfig
    ) -> Tuple[AttributedDigraph, Optional[AttributedHypergraph]]:
        kind, data = load_document(path) if Path(path).suffix.lower() == ".json" else (None, None)
        if kind == GRAPH_KIND:
            graph: AttributedDigraph = graph_from_dict(data)
            if pipeline.drop_isolated:
                graph, _ = remove_isolated(graph)
            return graph, None
        hypergraph = hypergraph_from_dict(data) if kind else self.load_hypergraph(path)
        graph, _ = self.construct(hypergraph, pipeline)
        return graph, hypergraph

    def analyze(
        self,
        input_path: PathLike,
        mode: str,
        pipeline: PipelineConfig,
        out: PathLike,
        node: Optional[str] = None,
        by_class: bool = False,
    ) -> Dict[str, Any]:
        """
        Run one analysis on a permissible walk graph (or a hypergraph, which is
        first turned into one using ``pipeline``) and write its report.

        Returns:
            Dictionary with the mode's headline values and output paths.
        """
        if mode not in ANALYSIS_MODES:
            raise InvalidParameter("mode", mode, f"must be one of {', '.join(ANALYSIS_MODES)}")
        graph, _ = self._load_graph(input_path, pipeline)
        out = Path(out)

        if mode == "interaction":
            matrix = interaction_matrix(graph, classes_from_attribute(graph, pipeline.class_attr))
            csv_path = self.writer.write_interaction_csv(out, matrix)
            classes = class_graph(matrix)
            logger.debug("Class graph has %d edges", classes.number_of_edges())
            dot_path = self.writer.write_text(
                output_path(out, ".dot", replace=(".csv",)),
                self.writer.render_class_graph_dot(classes),
            )
            self._print_matrix(matrix)
            return {
                "success": True,
                "labels": list(matrix.labels),
                "matrix": matrix.to_rows(),
                "outputs": [str(csv_path), str(dot_path)],
            }

        if mode == "components":
            components = weakly_connected_components(graph)
            try:
                compositions = component_composition(
                    graph, classes_from_attribute(graph, pipeline.class_attr)
                )
            except UnlabeledNode:
                compositions = None
            report = components_to_list(components, compositions)
            path = self.writer.write_json(out, report)
            sizes = [c.size for c in components]
            self.console.print(
                f"[bold]{len(components)}[/bold] weakly connected components; sizes {sizes[:10]}"
                + (" ..." if len(sizes) > 10 else "")
            )
            return {"success": True, "sizes": sizes, "outputs": [str(path)]}

        if mode == "downstream":
            if not node:
                raise InvalidParameter("node", node, "downstream mode needs --node")
            start = graph.node_by_name(node)
            names = graph.node_names
            neighbors = sorted(names[n] for n in downstream_neighbors(graph, start))
            reachable = sorted(names[n] for n in downstream_reachable(graph, start))
            path = self.writer.write_json(
                out, {"node": node, "neighbors": neighbors, "reachable": reachable}
            )
            self.console.print(
                f"{node}: [bold]{len(neighbors)}[/bold] downstream neighbors, "
                f"[bold]{len(reachable)}[/bold] downstream reachable"
            )
            return {
                "success": True,
                "neighbors": neighbors,
                "reachable": reachable,
                "outputs": [str(path)],
            }

        intervals = edge_intervals(graph, pipeline.time_attr)
        if not intervals:
            raise InputError(f"No node carries an interval attribute {pipeline.time_attr!r}")
        if by_class:
            class_of = classes_from_attribute(graph, pipeline.class_attr)
            grouped: Dict[str, List[Any]] = {}
            for n, interval in intervals.items():
                grouped.setdefault(class_of[n], []).append(interval)
            traces = trace_by_class(grouped, pipeline.samples)
            path = self.writer.write_class_traces_csv(out, traces)
            peaks = {label: max(n for _, n in rows) for label, rows in traces.items()}
            self.console.print(f"Trace peaks per class: {peaks}")
            return {"success": True, "peaks": peaks, "outputs": [str(path)]}
        samples = trace(list(intervals.values()), pipeline.samples)
        path = self.writer.write_trace_csv(out, samples)
        self.console.print(
            f"Trace over [bold]{len(intervals)}[/bold] intervals at "
            f"[bold]{len(samples)}[/bold] samples; peak {max(n for _, n in samples)}"
        )
        return {"success": True, "samples": samples, "outputs": [str(path)]}

    def sweep(
        self, input_path: PathLike, s_values: Sequence[int], pipeline: PipelineConfig, out: PathLike
    ) -> Dict[str, Any]:
        """
        Repeat interaction and component analysis for each s.

        Needs a hypergraph input, since every s rebuilds the line graph.
        """
        if Path(input_path).suffix.lower() == ".json":
            kind, data = load_document(input_path)
            if kind != HYPERGRAPH_KIND:
                raise InputError("--s-sweep needs a hypergraph input, not a built graph")
            hypergraph = hypergraph_from_dict(data)
        else:
            hypergraph = self.load_hypergraph(input_path)
        if pipeline.min_edge_size:
            hypergraph = restrict_edges(hypergraph, pipeline.min_edge_size)

        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(),
            TimeElapsedColumn(),
            console=self.console,
        ) as progress:
            task = progress.add_task("Sweeping s...", total=len(s_values))
            points = s_sweep(
                hypergraph,
                s_values,
                pipeline.clauses,
                pipeline.class_attr,
                on_step=lambda s: progress.update(task, advance=1, description=f"s={s}"),
            )
        path = self.writer.write_sweep_csv(out, points)

        table = Table(title="s-sweep")
        for column in ("s", "edges", "cross-class", "components"):
            table.add_column(column, justify="right")
        for point in points:
            table.add_row(
                str(point.s),
                str(point.matrix.total),
                str(point.cross_class),
                str(len(point.component_sizes)),
            )
        self.console.print(table)
        return {
            "success": True,
            "points": [
                {
                    "s": p.s,
                    "matrix": p.matrix.to_rows(),
                    "labels": list(p.matrix.labels),
                    "component_sizes": list(p.component_sizes),
                }
                for p in points
            ],
            "outputs": [str(path)],
        }

    def synth(
        self,
        out: PathLike,
        n_users: Optional[int] = None,
        migration_time: Optional[float] = None,
        seed: Optional[int] = None,
        threads_per_class: Optional[int] = None,
        horizon: Optional[float] = None,
        classes: Tuple[str, str] = ("A", "B"),
    ) -> Dict[str, Any]:
        """Write a seeded synthetic migration post log as a posts CSV."""
        posts = synth_migration(
            n_users=int(n_users if n_users is not None else config.get("n_users")),
            classes=classes,
            migration_time=float(
                migration_time if migration_time is not None else config.get("migration_time")
            ),
            seed=int(seed if seed is not None else config.get("seed")),
            threads_per_class=int(
                threads_per_class
                if threads_per_class is not None
                else config.get("threads_per_class")
            ),
            horizon=float(horizon if horizon is not None else config.get("horizon")),
        )
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_posts_csv(posts, path)
        self.console.print(
            f"Wrote [bold]{posts.n_posts}[/bold] posts by {posts.n_users} users "
            f"in {posts.n_threads} threads -> {path}"
        )
        return {
            "success": True,
            "users": posts.n_users,
            "threads": posts.n_threads,
            "posts": posts.n_posts,
            "output": str(path),
        }

    def _print_matrix(self, matrix: InteractionMatrix) -> None:
        table = Table(title="Interaction matrix (row -> column)")
        table.add_column("")
        for label in matrix.labels:
            table.add_column(label, justify="right")
        for label, row in zip(matrix.labels, matrix.to_rows()):
            table.add_row(label, *(str(n) for n in row))
        self.console.print(table)
