"""
Exceptions for permissible-walks.

Library code raises these; only the CLI turns them into exit codes.
"""

from typing import Any, Optional


class PermissibleWalksError(Exception):
    """Base class for all errors raised by the package."""


class InputError(PermissibleWalksError, ValueError):
    """The data handed to an operation is malformed or inconsistent."""


class ConfigurationError(PermissibleWalksError):
    """A flag, config value or predicate spec is invalid."""


class EmptyVertexSet(InputError):
    def __init__(self) -> None:
        super().__init__("A hypergraph needs at least one vertex")


class EmptyEdgeSet(InputError):
    def __init__(self) -> None:
        super().__init__("A hypergraph needs at least one hyperedge")


class UnknownVertexInEdge(InputError):
    def __init__(self, vertex: Any, edge: Any) -> None:
        self.vertex = vertex
        self.edge = edge
        super().__init__(f"Hyperedge {edge!r} references undeclared vertex {vertex!r}")


class NonIncidenceAttribute(InputError):
    def __init__(self, vertex: Any, edge: Any) -> None:
        self.vertex = vertex
        self.edge = edge
        super().__init__(
            f"Incidence attribute given for ({vertex!r}, {edge!r}) but {vertex!r} "
            f"is not a member of {edge!r}"
        )


class DuplicateName(InputError):
    def __init__(self, kind: str, name: Any) -> None:
        self.kind = kind
        self.name = name
        super().__init__(f"Duplicate {kind} name: {name!r}")


class KindMismatch(InputError):
    def __init__(self, expected: str, got: Any) -> None:
        self.expected = expected
        self.got = got
        got_kind = getattr(got, "kind", type(got).__name__)
        super().__init__(f"Expected a {expected} value, got {got_kind}")


class MissingAttribute(InputError):
    def __init__(self, owner: Any, name: str) -> None:
        self.owner = owner
        self.name = name
        super().__init__(f"{owner!r} has no attribute {name!r}")


class MissingIncidenceAttribute(InputError):
    def __init__(self, vertex: Any, edge: Any, name: str) -> None:
        self.vertex = vertex
        self.edge = edge
        self.name = name
        super().__init__(f"Incidence ({vertex!r}, {edge!r}) has no attribute {name!r}")


class MissingEdgeAttribute(InputError):
    def __init__(self, source: Any, target: Any, name: str) -> None:
        self.source = source
        self.target = target
        self.name = name
        super().__init__(f"Line graph edge {source!r}->{target!r} has no {name!r} value")


class NodeSetMismatch(InputError):
    def __init__(self) -> None:
        super().__init__("Permissible walk graphs must share the same node set")


class UnlabeledNode(InputError):
    def __init__(self, node: Any) -> None:
        self.node = node
        super().__init__(f"Node {node!r} has no class label")


class UnknownNode(InputError):
    def __init__(self, node: Any) -> None:
        self.node = node
        super().__init__(f"Node {node!r} is not in the graph")


class EmptyCollection(InputError):
    def __init__(self) -> None:
        super().__init__("The interval collection is empty")


class SampleOutsideSupport(InputError):
    def __init__(self, t: float, lo: float, hi: float) -> None:
        self.t = t
        super().__init__(f"Sample {t} lies outside the support [{lo}, {hi}]")


class MalformedRow(InputError):
    def __init__(self, line: int, reason: str, path: Optional[str] = None) -> None:
        self.line = line
        self.reason = reason
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"Malformed row at {where}: {reason}")


class InconsistentClass(InputError):
    def __init__(self, thread: Any, first: str, second: str) -> None:
        self.thread = thread
        super().__init__(
            f"Thread {thread!r} is labeled both {first!r} and {second!r}"
        )


class EmptyData(InputError):
    def __init__(self, what: str = "input") -> None:
        super().__init__(f"No data found in {what}")


class SelfLoopArc(InputError):
    def __init__(self, node: Any, timestamp: float) -> None:
        self.node = node
        self.timestamp = timestamp
        super().__init__(f"Arc {node!r}->{node!r} at t={timestamp} is a self-loop")


class PredicateSpecError(ConfigurationError):
    def __init__(self, spec: str, reason: str) -> None:
        self.spec = spec
        super().__init__(f"Invalid predicate spec {spec!r}: {reason}")


class InvalidParameter(ConfigurationError):
    def __init__(self, name: str, value: Any, reason: str) -> None:
        self.name = name
        self.value = value
        super().__init__(f"Invalid value {value!r} for {name}: {reason}")
