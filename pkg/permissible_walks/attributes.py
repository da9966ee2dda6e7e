"""
Attribute values, predicates and marginalizers.

Values are small frozen dataclasses, one per attribute kind. Predicates decide
whether a directed line graph edge is permissible from the attributes of its
endpoints; marginalizers reduce incidence attributes onto edges or vertices.
"""

import abc
import enum
import math
import re
from dataclasses import dataclass, field
from typing import (
    TYPE_CHECKING,
    Any,
    ClassVar,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from .errors import (
    EmptyCollection,
    InputError,
    InvalidParameter,
    KindMismatch,
    MissingAttribute,
    MissingIncidenceAttribute,
    PredicateSpecError,
)

if TYPE_CHECKING:
    from .hypergraph import AttributedHypergraph


def _finite(x: Any, what: str) -> float:
    try:
        value = float(x)
    except (TypeError, ValueError) as e:
        raise InputError(f"{what} must be a real number, got {x!r}") from e
    if not math.isfinite(value):
        raise InputError(f"{what} must be finite, got {x!r}")
    return value


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] on the time line."""

    lo: float
    hi: float
    kind: ClassVar[str] = "interval"

    def __post_init__(self) -> None:
        lo = _finite(self.lo, "Interval.lo")
        hi = _finite(self.hi, "Interval.hi")
        if lo > hi:
            raise InputError(f"Interval lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def contains(self, t: float) -> bool:
        return self.lo <= t <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo:g}, {self.hi:g}]"


@dataclass(frozen=True)
class FiniteSet:
    """Finite set of symbols, stored sorted and deduplicated."""

    elements: Tuple[str, ...] = ()
    kind: ClassVar[str] = "set"

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "elements", tuple(sorted({str(x) for x in self.elements}))
        )

    @classmethod
    def of(cls, *elements: str) -> "FiniteSet":
        return cls(tuple(elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __str__(self) -> str:
        return "{" + ", ".join(self.elements) + "}"


@dataclass(frozen=True)
class Boolean:
    value: bool
    kind: ClassVar[str] = "bool"

    def __post_init__(self) -> None:
        if not isinstance(self.value, bool):
            raise InputError(f"Boolean attribute needs a bool, got {self.value!r}")

    def __str__(self) -> str:
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Scalar:
    value: float
    kind: ClassVar[str] = "scalar"

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", _finite(self.value, "Scalar"))

    def __str__(self) -> str:
        return f"{self.value:g}"


@dataclass(frozen=True)
class Category:
    label: str
    kind: ClassVar[str] = "category"

    def __post_init__(self) -> None:
        object.__setattr__(self, "label", str(self.label))

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class Timestamp:
    t: float
    kind: ClassVar[str] = "timestamp"

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", _finite(self.t, "Timestamp"))

    def __str__(self) -> str:
        return f"t={self.t:g}"


@dataclass(frozen=True)
class DirectionPair:
    source: str
    target: str
    kind: ClassVar[str] = "direction"

    def __post_init__(self) -> None:
        object.__setattr__(self, "source", str(self.source))
        object.__setattr__(self, "target", str(self.target))

    def __str__(self) -> str:
        return f"{self.source}->{self.target}"


AttributeValue = Union[Interval, FiniteSet, Boolean, Scalar, Category, Timestamp, DirectionPair]

# Named attributes carried by one object (vertex, hyperedge, incidence, node).
Attributes = Mapping[str, AttributeValue]


def _expect(value: Any, cls: type) -> Any:
    if not isinstance(value, cls):
        raise KindMismatch(cls.kind, value)
    return value


def eval_strong_order(a: AttributeValue, b: AttributeValue) -> bool:
    """True iff interval ``a`` ends no later than interval ``b`` starts."""
    a = _expect(a, Interval)
    b = _expect(b, Interval)
    return a.hi <= b.lo


def eval_set_intersects(a: AttributeValue, b: AttributeValue, t: int = 1) -> bool:
    """True iff the two sets share at least ``t`` elements."""
    a = _expect(a, FiniteSet)
    b = _expect(b, FiniteSet)
    return len(set(a.elements).intersection(b.elements)) >= t


class Predicate(abc.ABC):
    """Binary predicate over the attributes of two line graph nodes.

    Simple predicates read one named attribute from each endpoint; the
    attribute name is supplied when the predicate is applied to a graph.
    """

    name: ClassVar[str] = ""
    symmetric: ClassVar[bool] = False

    @abc.abstractmethod
    def evaluate(self, a: AttributeValue, b: AttributeValue) -> bool:
        """Evaluate the predicate on two attribute values."""

    def __call__(self, a: AttributeValue, b: AttributeValue) -> bool:
        return self.evaluate(a, b)

    def required_attributes(self, attr_name: Optional[str]) -> Tuple[str, ...]:
        """Attribute names this predicate reads when applied under ``attr_name``."""
        if attr_name is None:
            raise PredicateSpecError(self.spec, "an attribute name is required")
        return (attr_name,)

    def holds(self, attrs_a: Attributes, attrs_b: Attributes, attr_name: Optional[str]) -> bool:
        """Evaluate on the named attribute of two attribute maps."""
        (name,) = self.required_attributes(attr_name)
        try:
            return self.evaluate(attrs_a[name], attrs_b[name])
        except KeyError as e:
            raise MissingAttribute("node", name) from e

    @property
    def spec(self) -> str:
        return self.name


@dataclass(frozen=True)
class StrongOrder(Predicate):
    name: ClassVar[str] = "strong-order"

    def evaluate(self, a: AttributeValue, b: AttributeValue) -> bool:
        return eval_strong_order(a, b)


@dataclass(frozen=True)
class SetIntersectsAtLeast(Predicate):
    t: int = 1
    name: ClassVar[str] = "set-intersects"
    symmetric: ClassVar[bool] = True

    def __post_init__(self) -> None:
        if isinstance(self.t, bool) or not isinstance(self.t, int) or self.t < 1:
            raise InvalidParameter("t", self.t, "must be a positive integer")

    def evaluate(self, a: AttributeValue, b: AttributeValue) -> bool:
        return eval_set_intersects(a, b, self.t)

    @property
    def spec(self) -> str:
        return f"{self.name}:t={self.t}"


@dataclass(frozen=True)
class BoolAnd(Predicate):
    name: ClassVar[str] = "bool-and"
    symmetric: ClassVar[bool] = True

    def evaluate(self, a: AttributeValue, b: AttributeValue) -> bool:
        return _expect(a, Boolean).value and _expect(b, Boolean).value


@dataclass(frozen=True)
class BoolOr(Predicate):
    name: ClassVar[str] = "bool-or"
    symmetric: ClassVar[bool] = True

    def evaluate(self, a: AttributeValue, b: AttributeValue) -> bool:
        return _expect(a, Boolean).value or _expect(b, Boolean).value


@dataclass(frozen=True)
class CategoryEqual(Predicate):
    name: ClassVar[str] = "category-equal"
    symmetric: ClassVar[bool] = True

    def evaluate(self, a: AttributeValue, b: AttributeValue) -> bool:
        return _expect(a, Category).label == _expect(b, Category).label


@dataclass(frozen=True)
class TimestampLessEq(Predicate):
    name: ClassVar[str] = "timestamp-leq"

    def evaluate(self, a: AttributeValue, b: AttributeValue) -> bool:
        return _expect(a, Timestamp).t <= _expect(b, Timestamp).t


@dataclass(frozen=True)
class DirectionChains(Predicate):
    """The head of the first arc is the tail of the second."""

    name: ClassVar[str] = "direction-chains"

    def evaluate(self, a: AttributeValue, b: AttributeValue) -> bool:
        return _expect(a, DirectionPair).target == _expect(b, DirectionPair).source


@dataclass(frozen=True)
class Conjunction(Predicate):
    """All clauses hold, each on its own named attribute."""

    clauses: Tuple[Tuple[str, Predicate], ...] = field(default_factory=tuple)
    name: ClassVar[str] = "and"

    def __post_init__(self) -> None:
        clauses = tuple((str(attr), pred) for attr, pred in self.clauses)
        if not clauses:
            raise PredicateSpecError("and()", "a conjunction needs at least one clause")
        if any(isinstance(pred, Conjunction) for _, pred in clauses):
            raise PredicateSpecError(self.spec_of(clauses), "conjunctions cannot be nested")
        object.__setattr__(self, "clauses", clauses)

    @property
    def symmetric(self) -> bool:  # type: ignore[override]
        return all(pred.symmetric for _, pred in self.clauses)

    def evaluate(self, a: Any, b: Any) -> bool:
        return self.holds(a, b, None)

    def required_attributes(self, attr_name: Optional[str]) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(attr for attr, _ in self.clauses))

    def holds(self, attrs_a: Attributes, attrs_b: Attributes, attr_name: Optional[str]) -> bool:
        return all(pred.holds(attrs_a, attrs_b, attr) for attr, pred in self.clauses)

    @staticmethod
    def spec_of(clauses: Iterable[Tuple[str, Predicate]]) -> str:
        return "and(" + ",".join(f"{attr}:{pred.spec}" for attr, pred in clauses) + ")"

    @property
    def spec(self) -> str:
        return self.spec_of(self.clauses)


_SIMPLE_PREDICATES = {
    cls.name: cls
    for cls in (StrongOrder, BoolAnd, BoolOr, CategoryEqual, TimestampLessEq, DirectionChains)
}

_SET_SPEC = re.compile(r"^set-intersects(?::t=(?P<t>[^,()]+))?$")


def parse_predicate(spec: str) -> Predicate:
    """
    Parse a predicate spec string.

    Grammar: ``strong-order``, ``set-intersects[:t=N]``, ``bool-and``,
    ``bool-or``, ``category-equal``, ``timestamp-leq``, ``direction-chains``
    and ``and(attr:pred,attr:pred,...)`` over the simple forms.

    Raises:
        PredicateSpecError: If the predicate text does not parse.
    """
    text = spec.strip()
    if text.startswith("and(") and text.endswith(")"):
        body = text[4:-1].strip()
        if not body:
            raise PredicateSpecError(spec, "empty conjunction")
        clauses: List[Tuple[str, Predicate]] = []
        for part in body.split(","):
            attr, sep, inner = part.strip().partition(":")
            if not sep or not attr.strip() or not inner.strip():
                raise PredicateSpecError(spec, f"clause {part.strip()!r} is not attr:predicate")
            inner_pred = parse_predicate(inner)
            if isinstance(inner_pred, Conjunction):
                raise PredicateSpecError(spec, "conjunctions cannot be nested")
            clauses.append((attr.strip(), inner_pred))
        return Conjunction(tuple(clauses))

    if text in _SIMPLE_PREDICATES:
        return _SIMPLE_PREDICATES[text]()

    match = _SET_SPEC.match(text)
    if match:
        raw_t = match.group("t")
        if raw_t is None:
            return SetIntersectsAtLeast()
        try:
            t = int(raw_t)
        except ValueError as e:
            raise PredicateSpecError(spec, f"threshold {raw_t!r} is not an integer") from e
        try:
            return SetIntersectsAtLeast(t)
        except InvalidParameter as e:
            raise PredicateSpecError(spec, str(e)) from e

    raise PredicateSpecError(spec, "unknown predicate")


class Marginalizer(enum.Enum):
    """Reductions of incidence attributes onto edges or vertices."""

    SET_UNION = "set-union"
    INTERVAL_HULL = "interval-hull"

    def reduce(self, values: Sequence[AttributeValue]) -> AttributeValue:
        if not values:
            raise EmptyCollection()
        if self is Marginalizer.SET_UNION:
            merged: set = set()
            for value in values:
                merged.update(_expect(value, FiniteSet).elements)
            return FiniteSet(tuple(merged))
        return hull(values)


def hull(values: Iterable[AttributeValue]) -> Interval:
    """Convex hull of intervals and timestamps."""
    lo = math.inf
    hi = -math.inf
    seen = False
    for value in values:
        if isinstance(value, Interval):
            lo, hi = min(lo, value.lo), max(hi, value.hi)
        elif isinstance(value, Timestamp):
            lo, hi = min(lo, value.t), max(hi, value.t)
        else:
            raise KindMismatch("interval", value)
        seen = True
    if not seen:
        raise EmptyCollection()
    return Interval(lo, hi)


def marginalize_edges(
    hypergraph: "AttributedHypergraph", attr_name: str, marginalizer: Marginalizer
) -> Dict[int, AttributeValue]:
    """
    Reduce an incidence attribute onto every hyperedge.

    Hyperedges without members have no incidences and get no entry.

    Raises:
        MissingIncidenceAttribute: If an incidence lacks ``attr_name``.
        KindMismatch: If a value does not suit the marginalizer.
    """
    result: Dict[int, AttributeValue] = {}
    for e in hypergraph.edge_ids:
        values = [
            _incidence_value(hypergraph, v, e, attr_name)
            for v in sorted(hypergraph.members(e))
        ]
        if values:
            result[e] = marginalizer.reduce(values)
    return result


def marginalize_vertices(
    hypergraph: "AttributedHypergraph", attr_name: str, marginalizer: Marginalizer
) -> Dict[int, AttributeValue]:
    """Reduce an incidence attribute onto every vertex that has incidences."""
    result: Dict[int, AttributeValue] = {}
    for v in hypergraph.vertex_ids:
        values = [
            _incidence_value(hypergraph, v, e, attr_name)
            for e in sorted(hypergraph.memberships(v))
        ]
        if values:
            result[v] = marginalizer.reduce(values)
    return result


def _incidence_value(
    hypergraph: "AttributedHypergraph", v: int, e: int, attr_name: str
) -> AttributeValue:
    try:
        return hypergraph.incidence_attrs[(v, e)][attr_name]
    except KeyError as err:
        raise MissingIncidenceAttribute(
            hypergraph.vertex_names[v], hypergraph.edge_names[e], attr_name
        ) from err


def extend_to_incidences(
    hypergraph: "AttributedHypergraph", attr_name: str, source: str = "edge"
) -> Dict[Tuple[int, int], AttributeValue]:
    """
    Copy a vertex or edge attribute down onto every incidence.

    Args:
        hypergraph: The hypergraph.
        attr_name: Attribute to copy.
        source: ``"edge"`` or ``"vertex"``.

    Raises:
        MissingAttribute: If an object on the source side lacks the attribute.
    """
    if source not in ("edge", "vertex"):
        raise InvalidParameter("source", source, "must be 'edge' or 'vertex'")
    result: Dict[Tuple[int, int], AttributeValue] = {}
    for v, e in hypergraph.incidences():
        if source == "edge":
            attrs, owner = hypergraph.edge_attrs.get(e, {}), hypergraph.edge_names[e]
        else:
            attrs, owner = hypergraph.vertex_attrs.get(v, {}), hypergraph.vertex_names[v]
        if attr_name not in attrs:
            raise MissingAttribute(owner, attr_name)
        result[(v, e)] = attrs[attr_name]
    return result


def encode_value(value: AttributeValue) -> Dict[str, Any]:
    """Encode a value in the JSON attribute format."""
    if isinstance(value, Interval):
        return {"interval": [value.lo, value.hi]}
    if isinstance(value, FiniteSet):
        return {"set": list(value.elements)}
    if isinstance(value, Boolean):
        return {"bool": value.value}
    if isinstance(value, Scalar):
        return {"scalar": value.value}
    if isinstance(value, Category):
        return {"category": value.label}
    if isinstance(value, Timestamp):
        return {"timestamp": value.t}
    if isinstance(value, DirectionPair):
        return {"direction": [value.source, value.target]}
    raise KindMismatch("attribute", value)


_LIST_PAYLOADS = ("interval", "set", "direction")


def decode_value(data: Mapping[str, Any]) -> AttributeValue:
    """Decode one value of the JSON attribute format."""
    if not isinstance(data, Mapping) or len(data) != 1:
        raise InputError(f"Attribute value must be a single-key object, got {data!r}")
    ((tag, payload),) = data.items()
    if tag in _LIST_PAYLOADS and not isinstance(payload, list):
        raise InputError(f"Payload for {tag!r} attribute must be a list, got {payload!r}")
    try:
        if tag == "interval":
            lo, hi = payload
            return Interval(lo, hi)
        if tag == "set":
            return FiniteSet(tuple(payload))
        if tag == "bool":
            return Boolean(payload)
        if tag == "scalar":
            return Scalar(payload)
        if tag == "category":
            return Category(payload)
        if tag == "timestamp":
            return Timestamp(payload)
        if tag == "direction":
            source, target = payload
            return DirectionPair(source, target)
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"Bad payload for {tag!r} attribute: {payload!r}") from e
    raise InputError(f"Unknown attribute kind {tag!r}")


def encode_attributes(attrs: Attributes) -> Dict[str, Dict[str, Any]]:
    return {name: encode_value(value) for name, value in sorted(attrs.items())}


def decode_attributes(data: Optional[Mapping[str, Any]]) -> Dict[str, AttributeValue]:
    return {str(name): decode_value(raw) for name, raw in (data or {}).items()}
