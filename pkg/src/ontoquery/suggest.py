"""Interactive formulation support: concept autocomplete, concept
annotations, relation listing, and schema path discovery."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from .errors import UnknownClassError
from .rdf import Iri
from .reasoner import SubclassClosure, properties_of
from .schema import PropertyInfo, SchemaIndex

DEFAULT_SUGGESTION_LIMIT = 20
DEFAULT_PATH_MAX_LENGTH = 6
PATH_MAX_LENGTH_CAP = 8

_WS = re.compile(r"\s+")


def _norm(text: str) -> str:
    return _WS.sub(" ", text.strip()).lower()


@dataclass
class Annotation:
    """What a pop-up shows for a concept: description, alternate labels,
    and the labels of its applicable properties."""

    description: str | None
    alt_labels: list[str]
    properties: list[str]


@dataclass
class Suggestion:
    class_iri: Iri
    label: str
    match_kind: str  # "label" | "altLabel"
    annotation: Annotation


def annotate(schema: SchemaIndex, closure: SubclassClosure, cls: Iri) -> Annotation:
    info = schema.class_info(cls)
    if info is None:
        raise UnknownClassError(cls)
    props = properties_of(schema, closure, cls)
    return Annotation(
        description=info.description,
        alt_labels=list(info.alt_labels),
        properties=[p.label for p in props],
    )


def suggest_concepts(
    schema: SchemaIndex,
    closure: SubclassClosure,
    prefix: str,
    limit: int = DEFAULT_SUGGESTION_LIMIT,
) -> list[Suggestion]:
    """Classes whose label or alternate label starts with the typed prefix
    (case-insensitive, whitespace-normalized).

    Ranking is deterministic: primary-label matches before altLabel
    matches, then shorter matched text, then lexicographic.
    """
    wanted = _norm(prefix)
    if not wanted:
        return []
    ranked = []
    for info in schema.classes.values():
        matched = None
        kind = None
        if _norm(info.label).startswith(wanted):
            matched, kind = info.label, "label"
        else:
            for alt in info.alt_labels:
                if _norm(alt).startswith(wanted):
                    matched, kind = alt, "altLabel"
                    break
        if matched is None:
            continue
        ranked.append((0 if kind == "label" else 1, len(matched), _norm(matched), info.iri.value, info, kind))
    ranked.sort(key=lambda r: r[:4])
    out = []
    for _, _, _, _, info, kind in ranked[: max(limit, 0)]:
        out.append(
            Suggestion(
                class_iri=info.iri,
                label=info.label,
                match_kind=kind,
                annotation=annotate(schema, closure, info.iri),
            )
        )
    return out


def suggest_relations(
    schema: SchemaIndex, closure: SubclassClosure, cls: Iri, direction: str
) -> list[PropertyInfo]:
    """Relations relevant to a selected concept.

    Outgoing relations are the reasoner's applicable properties; incoming
    relations are those whose range (declared or restriction filler)
    intersects the class's ancestor set. Ordered by label.
    """
    if schema.class_info(cls) is None:
        raise UnknownClassError(cls)
    if direction == "outgoing":
        return properties_of(schema, closure, cls)
    if direction != "incoming":
        raise ValueError(f"direction must be 'outgoing' or 'incoming', got {direction!r}")
    ancestors = closure.ancestors(cls)
    found: dict[Iri, PropertyInfo] = {}
    filler_ranges: dict[Iri, set[Iri]] = {}
    for info in schema.classes.values():
        for prop_iri, filler in info.restriction_props:
            filler_ranges.setdefault(prop_iri, set()).add(filler)
    for prop in schema.properties.values():
        if prop.kind != "object":
            continue
        if (prop.ranges | filler_ranges.get(prop.iri, set())) & ancestors:
            found[prop.iri] = prop
    return sorted(found.values(), key=lambda p: (p.label, p.iri.value))


@dataclass(frozen=True)
class SchemaPathStep:
    """One schema edge as traversed.

    ``subject``/``object`` keep the edge's declared orientation (domain
    class to range-or-filler class); ``direction`` records whether the
    traversal walked it that way ("forward") or from the range side back
    to the domain ("inverse").
    """

    subject: Iri
    property: Iri
    object: Iri
    direction: str  # "forward" | "inverse"


@dataclass(frozen=True)
class SchemaPath:
    steps: tuple[SchemaPathStep, ...]

    @property
    def length(self) -> int:
        return len(self.steps)


def schema_edges(schema: SchemaIndex) -> list[tuple[Iri, Iri, Iri]]:
    """Directed (domain class, property, range-or-filler class) edges of
    the schema graph, from declared domains/ranges and from restriction
    attachments."""
    edges: dict[tuple[Iri, Iri, Iri], None] = {}
    for prop in schema.properties.values():
        if prop.kind != "object":
            continue
        for d in prop.domains:
            for r in prop.ranges:
                edges[(d, prop.iri, r)] = None
    for info in schema.classes.values():
        for prop_iri, filler in info.restriction_props:
            edges[(info.iri, prop_iri, filler)] = None
    return list(edges)


def _compatible(closure: SubclassClosure, a: Iri, b: Iri) -> bool:
    # Subclass compatibility in either direction.
    return a in closure.reachable[b] or b in closure.reachable[a]


def iter_paths(
    schema: SchemaIndex,
    closure: SubclassClosure,
    start: Iri,
    goal: Iri,
    max_length: int,
) -> Iterator[SchemaPath]:
    """Enumerate simple schema paths lazily; abandoning the iterator
    cancels the enumeration."""
    if schema.class_info(start) is None:
        raise UnknownClassError(start)
    if schema.class_info(goal) is None:
        raise UnknownClassError(goal)
    if max_length > PATH_MAX_LENGTH_CAP:
        raise ValueError(f"maxLength may not exceed {PATH_MAX_LENGTH_CAP}")

    if start == goal:
        yield SchemaPath(steps=())
    edges = schema_edges(schema)

    stack: list[tuple[Iri, tuple[SchemaPathStep, ...], frozenset[Iri]]] = [
        (start, (), frozenset({start}))
    ]
    while stack:
        current, steps, visited = stack.pop()
        if len(steps) >= max_length:
            continue
        for s, p, o in edges:
            for step_subject, step_object, direction in (
                (s, o, "forward"),
                (o, s, "inverse"),
            ):
                if not _compatible(closure, step_subject, current):
                    continue
                if step_object in visited:
                    continue
                step = SchemaPathStep(s, p, o, direction)
                new_steps = steps + (step,)
                if step_object == goal:
                    yield SchemaPath(steps=new_steps)
                stack.append((step_object, new_steps, visited | {step_object}))


def discover_paths(
    schema: SchemaIndex,
    closure: SubclassClosure,
    start: Iri,
    goal: Iri,
    max_length: int = DEFAULT_PATH_MAX_LENGTH,
) -> list[SchemaPath]:
    """All simple paths between two concepts over the schema graph, walked
    in either edge orientation, ordered by length then edge labels."""
    found = list(iter_paths(schema, closure, start, goal, max_length))

    def sort_key(path: SchemaPath):
        labels = tuple(
            (schema.properties[s.property].label if s.property in schema.properties else s.property.value)
            for s in path.steps
        )
        shape = tuple((s.subject.value, s.property.value, s.object.value, s.direction) for s in path.steps)
        return (path.length, labels, shape)

    found.sort(key=sort_key)
    return found
