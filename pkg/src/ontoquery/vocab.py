"""Well-known vocabulary IRIs used by the schema digest and the parsers."""

from .rdf import Iri

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"
SKOS_NS = "http://www.w3.org/2004/02/skos/core#"

# Annotation vocabulary owned by this package (value-kind tagging for
# datatype properties, e.g. nucleotide sequences).
OQ_NS = "http://ontoquery.dev/ns#"

RDF_TYPE = Iri(RDF_NS + "type")

RDFS_SUBCLASS_OF = Iri(RDFS_NS + "subClassOf")
RDFS_LABEL = Iri(RDFS_NS + "label")
RDFS_COMMENT = Iri(RDFS_NS + "comment")
RDFS_DOMAIN = Iri(RDFS_NS + "domain")
RDFS_RANGE = Iri(RDFS_NS + "range")
RDFS_CLASS = Iri(RDFS_NS + "Class")

OWL_CLASS = Iri(OWL_NS + "Class")
OWL_OBJECT_PROPERTY = Iri(OWL_NS + "ObjectProperty")
OWL_DATATYPE_PROPERTY = Iri(OWL_NS + "DatatypeProperty")
OWL_RESTRICTION = Iri(OWL_NS + "Restriction")
OWL_ON_PROPERTY = Iri(OWL_NS + "onProperty")
OWL_SOME_VALUES_FROM = Iri(OWL_NS + "someValuesFrom")
OWL_ALL_VALUES_FROM = Iri(OWL_NS + "allValuesFrom")
OWL_MIN_CARDINALITY = Iri(OWL_NS + "minCardinality")
OWL_MAX_CARDINALITY = Iri(OWL_NS + "maxCardinality")
OWL_CARDINALITY = Iri(OWL_NS + "cardinality")

SKOS_ALT_LABEL = Iri(SKOS_NS + "altLabel")

OQ_VALUE_KIND = Iri(OQ_NS + "valueKind")

# Lexical datatype names used throughout the package, keyed by XSD IRI.
XSD_DATATYPES = {
    XSD_NS + "string": "string",
    XSD_NS + "decimal": "decimal",
    XSD_NS + "integer": "integer",
    XSD_NS + "boolean": "boolean",
}
