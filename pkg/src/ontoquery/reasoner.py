"""Bounded inference: subclass closure, property applicability, and
extended instance retrieval (a class plus all of its subclasses).

This is the "RDFS+ lite" subset the rest of the engine relies on. No
equivalence, inverse, or property-hierarchy reasoning; the closure is
materialized eagerly at load time while instance retrieval stays on
demand.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .errors import UnknownClassError
from .rdf import Graph, Iri
from .schema import PropertyInfo, SchemaIndex
from .vocab import RDF_TYPE

logger = logging.getLogger(__name__)


@dataclass
class SubclassClosure:
    """Reflexive-transitive reachability over the subclass edges.

    ``reachable[c]`` is the ancestor set of ``c`` including ``c`` itself.
    Mutually subclassed classes are grouped in ``cycles`` and treated as
    ancestors of one another rather than rejected.
    """

    reachable: dict[Iri, frozenset[Iri]] = field(default_factory=dict)
    cycles: list[frozenset[Iri]] = field(default_factory=list)
    # Inverse view: descendants[c] = every class whose ancestor set
    # contains c (again reflexive).
    descendants: dict[Iri, frozenset[Iri]] = field(default_factory=dict)

    def ancestors(self, iri: Iri) -> frozenset[Iri]:
        try:
            return self.reachable[iri]
        except KeyError:
            raise UnknownClassError(iri)

    def descendants_of(self, iri: Iri) -> frozenset[Iri]:
        try:
            return self.descendants[iri]
        except KeyError:
            raise UnknownClassError(iri)


def subclass_closure(schema: SchemaIndex) -> SubclassClosure:
    """Compute the reflexive-transitive closure of the subclass edges."""
    parents: dict[Iri, set[Iri]] = {c: set() for c in schema.classes}
    for child, parent in schema.direct_subclass_edges:
        parents.setdefault(child, set()).add(parent)
        parents.setdefault(parent, set())

    reachable: dict[Iri, frozenset[Iri]] = {}
    for cls in parents:
        seen = {cls}
        frontier = [cls]
        while frontier:
            nxt = []
            for c in frontier:
                for p in parents.get(c, ()):
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
            frontier = nxt
        reachable[cls] = frozenset(seen)

    # Mutual reachability marks a cycle group.
    grouped: set[Iri] = set()
    cycles: list[frozenset[Iri]] = []
    for cls in sorted(parents, key=lambda c: c.value):
        if cls in grouped:
            continue
        group = frozenset(
            other
            for other in reachable[cls]
            if other != cls and cls in reachable[other]
        )
        if group:
            full = group | {cls}
            cycles.append(full)
            grouped |= full
    if cycles:
        logger.warning(
            "subclass cycles detected: %s",
            [", ".join(sorted(c.value for c in grp)) for grp in cycles],
        )

    descendants: dict[Iri, set[Iri]] = {c: set() for c in parents}
    for cls, ancestors in reachable.items():
        for anc in ancestors:
            descendants[anc].add(cls)

    return SubclassClosure(
        reachable=reachable,
        cycles=cycles,
        descendants={c: frozenset(d) for c, d in descendants.items()},
    )


def is_subclass_of(closure: SubclassClosure, child: Iri, parent: Iri) -> bool:
    """True iff ``parent`` is in the (reflexive) ancestor set of ``child``."""
    if parent not in closure.reachable:
        raise UnknownClassError(parent)
    return parent in closure.ancestors(child)


def properties_of(
    schema: SchemaIndex, closure: SubclassClosure, cls: Iri
) -> list[PropertyInfo]:
    """All properties applicable to a class: those whose declared domain
    intersects the class's ancestor set, plus restriction-attached
    properties of the class and its ancestors. Ordered by label."""
    ancestors = closure.ancestors(cls)
    found: dict[Iri, PropertyInfo] = {}
    for info in schema.properties.values():
        if info.domains & ancestors:
            found[info.iri] = info
    for anc in ancestors:
        cls_info = schema.class_info(anc)
        if cls_info is None:
            continue
        for prop_iri, _filler in cls_info.restriction_props:
            prop = schema.property_info(prop_iri)
            if prop is not None:
                found[prop_iri] = prop
    return sorted(found.values(), key=lambda p: (p.label, p.iri.value))


def restriction_fillers(
    schema: SchemaIndex, closure: SubclassClosure, cls: Iri, prop: Iri
) -> set[Iri]:
    """Filler classes of existential restrictions for ``prop`` on ``cls``
    or any of its ancestors."""
    fillers: set[Iri] = set()
    for anc in closure.ancestors(cls):
        cls_info = schema.class_info(anc)
        if cls_info is None:
            continue
        for prop_iri, filler in cls_info.restriction_props:
            if prop_iri == prop:
                fillers.add(filler)
    return fillers


@dataclass
class ExtendedInstances:
    """Instances of a class partitioned by how they were admitted.

    ``direct`` holds instances asserted under the queried class itself;
    ``via_subclass`` maps each remaining instance to the proper subclass
    that typed it. The two parts are disjoint by construction.
    """

    queried_class: Iri
    direct: set[Iri] = field(default_factory=set)
    via_subclass: dict[Iri, Iri] = field(default_factory=dict)

    def all_instances(self) -> set[Iri]:
        return self.direct | set(self.via_subclass)


def asserted_types(instance: Iri, graphs: Iterable[Graph]) -> set[Iri]:
    types: set[Iri] = set()
    for graph in graphs:
        for t in graph.lookup(subject=instance, predicate=RDF_TYPE):
            if isinstance(t.object, Iri):
                types.add(t.object)
    return types


def admitting_subclass(
    closure: SubclassClosure, queried: Iri, types: set[Iri]
) -> Iri | None:
    """Deterministically pick the witness subclass: the lexicographically
    smallest asserted proper subclass of the queried class."""
    candidates = sorted(
        t.value
        for t in types
        if t != queried and t in closure.reachable and queried in closure.reachable[t]
    )
    return Iri(candidates[0]) if candidates else None


def instances_of_extended(
    closure: SubclassClosure, cls: Iri, graphs: Iterable[Graph]
) -> ExtendedInstances:
    """Scan type assertions across ``graphs`` and collect instances of
    ``cls`` or any subclass. An instance asserted under both the class and
    a subclass counts as direct."""
    subclasses = closure.descendants_of(cls)
    result = ExtendedInstances(queried_class=cls)
    admitted: dict[Iri, set[Iri]] = {}
    graph_list = list(graphs)
    for graph in graph_list:
        for sub in subclasses:
            for t in graph.lookup(predicate=RDF_TYPE, obj=sub):
                if isinstance(t.subject, Iri):
                    admitted.setdefault(t.subject, set()).add(sub)
    for instance, types in admitted.items():
        if cls in types:
            result.direct.add(instance)
        else:
            witness = admitting_subclass(closure, cls, types)
            if witness is not None:
                result.via_subclass[instance] = witness
    return result
