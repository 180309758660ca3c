"""Directed graphs as 1-dimensional cell complexes, plus strength filtrations.

A network is ingested from a single JSON document (see ``parse_network``),
validated once, and then treated as immutable. Edge strengths are parsed from
decimal strings into exact rationals so that critical-value deduplication is
never tolerance-based. Every filtration level keeps all vertices; only edges
enter as the strength threshold moves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping, NamedTuple, Sequence

from .errors import ValidationError
from .field import FieldSpec


class Edge(NamedTuple):
    id: str
    tail: str
    head: str


class FiltrationDirection(Enum):
    """Which end of the strength range enters the filtration first."""

    WEAK_FIRST = "weak-first"
    STRONG_FIRST = "strong-first"


@dataclass(frozen=True)
class DiGraphComplex:
    """A finite digraph with per-edge capacity and strength.

    Vertex and edge order is the order of appearance in the input and is
    preserved everywhere downstream; all derived matrices inherit it.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    cap: Mapping[str, int]
    strength: Mapping[str, Fraction]
    sources: tuple[str, ...]
    targets: tuple[str, ...]

    def edge_by_id(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def in_edges(self, v: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.head == v)

    def out_edges(self, v: str) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.tail == v)


@dataclass(frozen=True)
class FiltrationLevel:
    """One rung of the filtration: the threshold and the edges alive there."""

    index: int
    critical_value: Fraction
    alive_edges: tuple[str, ...]


def parse_strength(value: Any) -> Fraction:
    """Parse a strength value exactly.

    Decimal strings are the canonical wire form. Ints pass through; floats
    are accepted for convenience but go through their shortest decimal
    representation so `1.2` means 6/5, not the nearest binary float.
    """
    if isinstance(value, bool):
        raise ValidationError(f"strength {value!r} is not a number")
    if isinstance(value, float):
        value = repr(value)
    try:
        s = Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ValidationError(f"strength {value!r} is not a decimal number") from None
    return s


def build_graph(spec: Mapping[str, Any]) -> DiGraphComplex:
    """Validate a network description and freeze it into a DiGraphComplex.

    Raises:
        ValidationError: duplicate ids, self-loops, dangling endpoints,
            non-positive capacities, negative strengths, or overlapping
            source/target sets. Messages name the offending entity.
    """
    vertices = list(spec.get("vertices", []))
    seen: set[str] = set()
    for v in vertices:
        if not isinstance(v, str) or not v:
            raise ValidationError(f"vertex id {v!r} must be a non-empty string")
        if v in seen:
            raise ValidationError(f"duplicate vertex id {v!r}")
        seen.add(v)
    vset = seen

    edges: list[Edge] = []
    cap: dict[str, int] = {}
    strength: dict[str, Fraction] = {}
    for raw in spec.get("edges", []):
        eid = raw.get("id")
        if not isinstance(eid, str) or not eid:
            raise ValidationError(f"edge id {eid!r} must be a non-empty string")
        if eid in cap:
            raise ValidationError(f"duplicate edge id {eid!r}")
        tail, head = raw.get("tail"), raw.get("head")
        if tail not in vset:
            raise ValidationError(f"edge {eid!r} has unknown tail {tail!r}")
        if head not in vset:
            raise ValidationError(f"edge {eid!r} has unknown head {head!r}")
        if tail == head:
            raise ValidationError(f"edge {eid!r} is a self-loop at {tail!r}")
        c = raw.get("cap", 1)
        if not isinstance(c, int) or isinstance(c, bool) or c < 1:
            raise ValidationError(f"edge {eid!r} has invalid capacity {c!r} (need integer >= 1)")
        s = parse_strength(raw.get("strength", 0))
        if s < 0:
            raise ValidationError(f"edge {eid!r} has negative strength {s}")
        edges.append(Edge(eid, tail, head))
        cap[eid] = c
        strength[eid] = s

    sources = tuple(spec.get("sources", []))
    targets = tuple(spec.get("targets", []))
    for name, group in (("source", sources), ("target", targets)):
        for v in group:
            if v not in vset:
                raise ValidationError(f"{name} {v!r} is not a declared vertex")
    overlap = set(sources) & set(targets)
    if overlap:
        raise ValidationError(f"vertices declared both source and target: {sorted(overlap)}")

    return DiGraphComplex(
        vertices=tuple(vertices),
        edges=tuple(edges),
        cap=cap,
        strength=strength,
        sources=sources,
        targets=targets,
    )


def critical_values(g: DiGraphComplex) -> list[Fraction]:
    """Sorted, deduplicated strengths: the thresholds where the sublevel
    subcomplex strictly grows."""
    return sorted(set(g.strength.values()))


def build_filtration(
    g: DiGraphComplex, direction: FiltrationDirection = FiltrationDirection.WEAK_FIRST
) -> list[FiltrationLevel]:
    """Nested edge subsets at each critical value; all vertices at every level.

    weak-first: level t holds edges with strength <= the (t+1)-th smallest
    critical value, so the weakest edges appear first. strong-first reverses
    the comparison: level t holds edges with strength >= the (t+1)-th largest
    critical value. Either way the final level is the whole graph.

    A graph with no edges yields a single level with threshold 0.
    """
    cs = critical_values(g)
    if not cs:
        return [FiltrationLevel(0, Fraction(0), ())]
    levels = []
    if direction is FiltrationDirection.WEAK_FIRST:
        thresholds = cs
        alive = lambda e, c: g.strength[e.id] <= c  # noqa: E731
    else:
        thresholds = list(reversed(cs))
        alive = lambda e, c: g.strength[e.id] >= c  # noqa: E731
    for t, c in enumerate(thresholds):
        levels.append(FiltrationLevel(t, c, tuple(e.id for e in g.edges if alive(e, c))))
    return levels


def fraction_to_decimal(x: Fraction) -> str:
    """Exact decimal rendering when the denominator divides a power of 10,
    `num/den` otherwise. Used for reports and JSON exports."""
    den = x.denominator
    two = five = 0
    while den % 2 == 0:
        den //= 2
        two += 1
    while den % 5 == 0:
        den //= 5
        five += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(two, five)
    if digits == 0:
        return str(x.numerator)
    scaled = x.numerator * 10**digits // x.denominator
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled)).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def read_network_file(path: str) -> dict:
    """Load a network spec JSON file, keeping float literals as strings so
    strengths stay exact."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh, parse_float=str)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: top level must be a JSON object")
    return doc


def parse_network(spec: Mapping[str, Any]) -> tuple[DiGraphComplex, FieldSpec, Sequence[Mapping] | None]:
    """Split one network document into graph, field, and raw coding entries.

    The codings section, when present, is returned unparsed; interpreting it
    needs the capacity/stalk layout and belongs to the coding module.
    """
    if "field_p" not in spec:
        raise ValidationError("network spec is missing 'field_p'")
    p = spec["field_p"]
    if not isinstance(p, int) or isinstance(p, bool):
        raise ValidationError(f"field_p must be an integer, got {p!r}")
    field = FieldSpec(p)
    graph = build_graph(spec)
    codings = spec.get("codings")
    if codings is not None and not isinstance(codings, list):
        raise ValidationError("'codings' must be an array of {vertex, edge, matrix} objects")
    return graph, field, codings
