"""Schema digest: classes, properties, labels, subclass edges, restrictions.

The digest is built once from the schema graph and shared read-only by the
reasoner, the suggestion engine, and the compiler. The build is tolerant:
unknown predicates are ignored, classes referenced but never declared are
auto-registered, and unsupported restriction flavors are skipped with a
warning.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .rdf import BlankNode, Graph, Iri, Literal
from . import vocab

logger = logging.getLogger(__name__)


def _label_from_iri(iri: Iri) -> str:
    return iri.local_name.replace("_", " ")


@dataclass
class ClassInfo:
    iri: Iri
    label: str
    description: str | None = None
    alt_labels: list[str] = field(default_factory=list)
    # (property IRI, filler class IRI) pairs harvested from existential
    # restrictions attached to this class.
    restriction_props: list[tuple[Iri, Iri]] = field(default_factory=list)


@dataclass
class PropertyInfo:
    iri: Iri
    label: str
    kind: str  # "object" | "data"
    domains: set[Iri] = field(default_factory=set)
    ranges: set[Iri] = field(default_factory=set)  # class IRIs (object kind)
    datatype: str | None = None  # lexical datatype name (data kind)
    value_kind: str | None = None  # e.g. "nucleotide-sequence"


@dataclass
class SchemaIndex:
    classes: dict[Iri, ClassInfo] = field(default_factory=dict)
    properties: dict[Iri, PropertyInfo] = field(default_factory=dict)
    direct_subclass_edges: set[tuple[Iri, Iri]] = field(default_factory=set)

    def class_info(self, iri: Iri) -> ClassInfo | None:
        return self.classes.get(iri)

    def property_info(self, iri: Iri) -> PropertyInfo | None:
        return self.properties.get(iri)

    def find_class_by_label(self, label: str) -> ClassInfo | None:
        wanted = label.strip().lower()
        for info in self.classes.values():
            if info.label.lower() == wanted:
                return info
            if any(alt.lower() == wanted for alt in info.alt_labels):
                return info
        return None

    def find_property_by_label(self, label: str) -> PropertyInfo | None:
        wanted = label.strip().lower()
        for info in self.properties.values():
            if info.label.lower() == wanted:
                return info
        return None


def _ensure_class(index: SchemaIndex, iri: Iri) -> ClassInfo:
    info = index.classes.get(iri)
    if info is None:
        info = ClassInfo(iri=iri, label=_label_from_iri(iri))
        index.classes[iri] = info
    return info


def build_schema_index(schema_graph: Graph) -> SchemaIndex:
    """Digest a schema graph into the structures the engine navigates.

    Classes are collected from declarations and from every IRI referenced
    as a subclass endpoint, property domain/range, or restriction filler.
    Labels come from rdfs:label, descriptions from rdfs:comment, alternate
    labels from skos:altLabel; labels default to the IRI local name.
    """
    index = SchemaIndex()

    # Blank nodes typed as restrictions, with their attached statements.
    restriction_nodes: set[BlankNode] = set()
    for t in schema_graph.lookup(predicate=vocab.RDF_TYPE, obj=vocab.OWL_RESTRICTION):
        if isinstance(t.subject, BlankNode):
            restriction_nodes.add(t.subject)

    # Class declarations.
    for class_type in (vocab.OWL_CLASS, vocab.RDFS_CLASS):
        for t in schema_graph.lookup(predicate=vocab.RDF_TYPE, obj=class_type):
            if isinstance(t.subject, Iri):
                _ensure_class(index, t.subject)

    # Subclass edges between named classes; edges into blank nodes are
    # restriction attachments handled below.
    for t in schema_graph.lookup(predicate=vocab.RDFS_SUBCLASS_OF):
        if isinstance(t.subject, Iri) and isinstance(t.object, Iri):
            _ensure_class(index, t.subject)
            _ensure_class(index, t.object)
            index.direct_subclass_edges.add((t.subject, t.object))

    # Properties.
    for prop_type, kind in (
        (vocab.OWL_OBJECT_PROPERTY, "object"),
        (vocab.OWL_DATATYPE_PROPERTY, "data"),
    ):
        for t in schema_graph.lookup(predicate=vocab.RDF_TYPE, obj=prop_type):
            if not isinstance(t.subject, Iri):
                continue
            iri = t.subject
            if iri not in index.properties:
                index.properties[iri] = PropertyInfo(
                    iri=iri, label=_label_from_iri(iri), kind=kind
                )

    for iri, info in list(index.properties.items()):
        for t in schema_graph.lookup(subject=iri, predicate=vocab.RDFS_DOMAIN):
            if isinstance(t.object, Iri):
                info.domains.add(t.object)
                _ensure_class(index, t.object)
        for t in schema_graph.lookup(subject=iri, predicate=vocab.RDFS_RANGE):
            if not isinstance(t.object, Iri):
                continue
            datatype = vocab.XSD_DATATYPES.get(t.object.value)
            if datatype is not None:
                if info.kind == "object":
                    logger.warning(
                        "property %s declared as object property but has "
                        "datatype range %s; treating as data property",
                        iri,
                        t.object,
                    )
                    info.kind = "data"
                info.datatype = datatype
            elif t.object.value.startswith(vocab.XSD_NS):
                logger.warning(
                    "datatype %s not supported, mapping to string", t.object
                )
                info.kind = "data"
                info.datatype = "string"
            else:
                info.ranges.add(t.object)
                _ensure_class(index, t.object)
        if info.kind == "data" and info.datatype is None:
            info.datatype = "string"
        for t in schema_graph.lookup(subject=iri, predicate=vocab.OQ_VALUE_KIND):
            if isinstance(t.object, Literal):
                info.value_kind = t.object.lexical

    # Restriction harvesting: class --subClassOf--> [a owl:Restriction ;
    # owl:onProperty P ; owl:someValuesFrom F]. Only the existential flavor
    # attaches an edge; others are recognized and skipped.
    for t in schema_graph.lookup(predicate=vocab.RDFS_SUBCLASS_OF):
        if not (isinstance(t.subject, Iri) and isinstance(t.object, BlankNode)):
            continue
        bnode = t.object
        if bnode not in restriction_nodes:
            continue
        on_props = [
            o for o in schema_graph.objects_of(bnode, vocab.OWL_ON_PROPERTY)
            if isinstance(o, Iri)
        ]
        fillers = [
            o for o in schema_graph.objects_of(bnode, vocab.OWL_SOME_VALUES_FROM)
            if isinstance(o, Iri)
        ]
        if not on_props:
            logger.warning("restriction on %s without owl:onProperty, skipped", t.subject)
            continue
        prop_iri = on_props[0]
        if not fillers:
            flavor = "unknown"
            for flavor_pred, name in (
                (vocab.OWL_ALL_VALUES_FROM, "allValuesFrom"),
                (vocab.OWL_MIN_CARDINALITY, "minCardinality"),
                (vocab.OWL_MAX_CARDINALITY, "maxCardinality"),
                (vocab.OWL_CARDINALITY, "cardinality"),
            ):
                if any(True for _ in schema_graph.lookup(subject=bnode, predicate=flavor_pred)):
                    flavor = name
                    break
            logger.warning(
                "ignoring %s restriction on %s via %s (only someValuesFrom "
                "attaches properties)",
                flavor,
                t.subject,
                prop_iri,
            )
            continue
        filler = fillers[0]
        if filler.value in vocab.XSD_DATATYPES or filler.value.startswith(vocab.XSD_NS):
            logger.warning(
                "ignoring restriction with datatype filler %s on %s", filler, t.subject
            )
            continue
        cls = _ensure_class(index, t.subject)
        _ensure_class(index, filler)
        if prop_iri not in index.properties:
            index.properties[prop_iri] = PropertyInfo(
                iri=prop_iri, label=_label_from_iri(prop_iri), kind="object"
            )
        if (prop_iri, filler) not in cls.restriction_props:
            cls.restriction_props.append((prop_iri, filler))

    # Annotations for named classes.
    for iri, info in index.classes.items():
        labels = [
            o.lexical
            for o in schema_graph.objects_of(iri, vocab.RDFS_LABEL)
            if isinstance(o, Literal)
        ]
        if labels:
            info.label = labels[0]
        comments = [
            o.lexical
            for o in schema_graph.objects_of(iri, vocab.RDFS_COMMENT)
            if isinstance(o, Literal)
        ]
        if comments:
            info.description = comments[0]
        info.alt_labels = sorted(
            o.lexical
            for o in schema_graph.objects_of(iri, vocab.SKOS_ALT_LABEL)
            if isinstance(o, Literal)
        )

    # Property labels.
    for iri, info in index.properties.items():
        labels = [
            o.lexical
            for o in schema_graph.objects_of(iri, vocab.RDFS_LABEL)
            if isinstance(o, Literal)
        ]
        if labels:
            info.label = labels[0]

    return index
