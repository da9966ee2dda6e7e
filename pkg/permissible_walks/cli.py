"""
Command-line interface for permissible-walks.
"""

import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click
from rich.console import Console
from rich.logging import RichHandler

from . import __version__
from .config import PipelineConfig, config
from .core import ANALYSIS_MODES, FORMATS, WalkPipeline
from .errors import ConfigurationError, InputError, InvalidParameter


def _setup_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else str(config.get("log_level", "WARNING")).upper()
    logger = logging.getLogger("permissible_walks")
    logger.handlers = [RichHandler(console=Console(stderr=True), show_path=False)]
    logger.setLevel(level)


def _parse_range(
    name: str, text: str, cast: Callable[[str], Any] = float
) -> Tuple[Optional[Any], Optional[Any]]:
    """Parse ``lo..hi``; an empty end comes back as ``None``."""
    if ".." not in text:
        raise InvalidParameter(name, text, "expected lo..hi")
    lo_text, hi_text = (part.strip() for part in text.split("..", 1))
    try:
        lo = cast(lo_text) if lo_text else None
        hi = cast(hi_text) if hi_text else None
    except ValueError as e:
        kind = getattr(cast, "__name__", "number")
        raise InvalidParameter(name, text, f"bounds must be {kind}s") from e
    if lo is not None and hi is not None and lo > hi:
        raise InvalidParameter(name, text, "lower bound exceeds upper bound")
    return lo, hi


def _run(action: Callable[[Console], Dict[str, Any]]) -> None:
    """Run one command body and map library errors to exit codes."""
    console = Console()
    try:
        result = action(console)
    except ConfigurationError as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        sys.exit(2)
    except (InputError, OSError) as e:
        console.print(f"[bold red]Error:[/bold red] {e}")
        sys.exit(1)
    if not result.get("success", False):
        console.print(f"[bold red]Error:[/bold red] {result.get('message', 'Unknown error')}")
        sys.exit(1)


def pipeline_options(command: Callable) -> Callable:
    """Options shared by every command that builds a permissible walk graph."""
    options = [
        click.option("--s", "s", type=int, help="Minimum shared vertices for adjacency (default from config)"),
        click.option(
            "--predicate",
            "-p",
            "predicates",
            multiple=True,
            help="Predicate spec, e.g. strong-order or 'and(time:strong-order,topics:set-intersects)'. Repeat to intersect.",
        ),
        click.option(
            "--attr",
            "-a",
            "attrs",
            multiple=True,
            help="Attribute for each non-conjunction --predicate, in the same order",
        ),
        click.option("--min-edge-size", type=int, help="Drop hyperedges with fewer members before construction"),
        click.option("--class-attr", help="Node attribute holding the class label"),
        click.option("--drop-isolated", is_flag=True, help="Remove nodes without incident edges"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _pipeline(
    s: Optional[int],
    predicates: Sequence[str],
    attrs: Sequence[str],
    min_edge_size: Optional[int],
    class_attr: Optional[str],
    drop_isolated: bool,
    samples: Optional[int] = None,
) -> PipelineConfig:
    return PipelineConfig.from_options(
        s=s,
        predicates=predicates,
        attrs=attrs,
        min_edge_size=min_edge_size,
        class_attr=class_attr,
        samples=samples,
        drop_isolated=drop_isolated,
    )


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level")
def cli(verbose: bool) -> None:
    """Permissible walks - directed, attribute-respecting line graphs of hypergraphs."""
    _setup_logging(verbose)


@cli.command()
@click.argument("input_path", type=click.Path(dir_okay=False))
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False), help="Hypergraph JSON to write")
@click.option("--format", "fmt", type=click.Choice(FORMATS), help="Input format (detected when omitted)")
@click.option("--window", help="Closed time window lo..hi for posts input; either end may be empty")
def build(input_path: str, out: str, fmt: Optional[str], window: Optional[str]) -> None:
    """Validate an input file and write it as hypergraph JSON."""

    def action(console: Console) -> Dict[str, Any]:
        bounds = _parse_range("window", window) if window else None
        return WalkPipeline(console=console).build(input_path, out, fmt=fmt, window=bounds)

    _run(action)


@cli.command()
@click.argument("input_path", type=click.Path(dir_okay=False))
@pipeline_options
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False), help="Output stem; .json and .dot are written")
def permissible(
    input_path: str,
    s: Optional[int],
    predicates: Tuple[str, ...],
    attrs: Tuple[str, ...],
    min_edge_size: Optional[int],
    class_attr: Optional[str],
    drop_isolated: bool,
    out: str,
) -> None:
    """Build the permissible walk graph of a hypergraph."""

    def action(console: Console) -> Dict[str, Any]:
        pipeline = _pipeline(s, predicates, attrs, min_edge_size, class_attr, drop_isolated)
        return WalkPipeline(console=console).permissible(input_path, pipeline, out)

    _run(action)


@cli.command()
@click.argument("input_path", type=click.Path(dir_okay=False))
@click.option("--mode", "-m", type=click.Choice(ANALYSIS_MODES), default="interaction", show_default=True)
@pipeline_options
@click.option("--node", "-n", help="Start node for downstream mode")
@click.option("--samples", type=int, help="Trace sample count (default from config)")
@click.option("--by-class", is_flag=True, help="Trace mode: one trace per class")
@click.option("--s-sweep", "s_sweep", help="Repeat interaction and component analysis for s in a..b")
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False), help="Report file to write")
def analyze(
    input_path: str,
    mode: str,
    s: Optional[int],
    predicates: Tuple[str, ...],
    attrs: Tuple[str, ...],
    min_edge_size: Optional[int],
    class_attr: Optional[str],
    drop_isolated: bool,
    node: Optional[str],
    samples: Optional[int],
    by_class: bool,
    s_sweep: Optional[str],
    out: str,
) -> None:
    """Run an analysis on a permissible walk graph or a hypergraph."""

    def action(console: Console) -> Dict[str, Any]:
        pipeline = _pipeline(s, predicates, attrs, min_edge_size, class_attr, drop_isolated, samples)
        runner = WalkPipeline(console=console)
        if s_sweep:
            lo, hi = _parse_range("s-sweep", s_sweep, cast=int)
            if lo is None or hi is None or lo < 0:
                raise InvalidParameter("s-sweep", s_sweep, "expected non-negative bounds a..b")
            s_values: List[int] = list(range(lo, hi + 1))
            return runner.sweep(input_path, s_values, pipeline, out)
        return runner.analyze(input_path, mode, pipeline, out, node=node, by_class=by_class)

    _run(action)


@cli.command()
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False), help="Posts CSV to write")
@click.option("--users", "n_users", type=int, help="Number of users (default from config)")
@click.option("--migration-time", type=float, help="Time separating class-A and class-B activity")
@click.option("--threads-per-class", type=int, help="Threads per class (default from config)")
@click.option("--horizon", type=float, help="End of the simulated period")
@click.option("--seed", type=int, help="Random seed (default from config)")
@click.option("--classes", default="A,B", show_default=True, help="Comma-separated source and destination class labels")
def synth(
    out: str,
    n_users: Optional[int],
    migration_time: Optional[float],
    threads_per_class: Optional[int],
    horizon: Optional[float],
    seed: Optional[int],
    classes: str,
) -> None:
    """Generate a synthetic post log where authors migrate between classes."""

    def action(console: Console) -> Dict[str, Any]:
        labels = tuple(label.strip() for label in classes.split(","))
        if len(labels) != 2 or not all(labels) or labels[0] == labels[1]:
            raise InvalidParameter("classes", classes, "expected two distinct labels")
        return WalkPipeline(console=console).synth(
            out,
            n_users=n_users,
            migration_time=migration_time,
            seed=seed,
            threads_per_class=threads_per_class,
            horizon=horizon,
            classes=labels,
        )

    _run(action)


def main(argv: Optional[List[str]] = None) -> None:
    """Main entry point for the CLI."""
    cli(args=argv)


if __name__ == "__main__":
    main()
