"""Ontology-guided query formulation and answering over RDF datasets.

Build a path query step by step against an ontology schema, execute it
over one or all loaded datasets with subclass inference, and read the
answers partitioned into specific and general results.
"""

from .compiler import (
    EvaluationPlan,
    SparqlText,
    compile,
    emit_sparql,
    parse_query_text,
)
from .config import Deployment, load_deployment
from .engine import (
    DatasetStore,
    PartitionedResults,
    ResultCache,
    ResultTable,
    cached_execute,
    display_value,
    execute,
    partition_results,
)
from .enrichment import (
    AlignmentService,
    EnrichmentJob,
    JobRegistry,
    StubAlignmentService,
    detect_enrichable_columns,
)
from .errors import OntoQueryError
from .query import PathQuery, QueryBuilder, canonicalize
from .rdf import BlankNode, Graph, Iri, Literal, Triple
from .reasoner import (
    SubclassClosure,
    instances_of_extended,
    properties_of,
    subclass_closure,
)
from .runtime import Runtime
from .schema import SchemaIndex, build_schema_index
from .suggest import annotate, discover_paths, suggest_concepts, suggest_relations
from .turtle import load_turtle, serialize_turtle

__version__ = "0.1.0"

__all__ = [
    "AlignmentService",
    "BlankNode",
    "DatasetStore",
    "Deployment",
    "EnrichmentJob",
    "EvaluationPlan",
    "Graph",
    "Iri",
    "JobRegistry",
    "Literal",
    "OntoQueryError",
    "PartitionedResults",
    "PathQuery",
    "QueryBuilder",
    "ResultCache",
    "ResultTable",
    "Runtime",
    "SchemaIndex",
    "SparqlText",
    "StubAlignmentService",
    "SubclassClosure",
    "Triple",
    "annotate",
    "build_schema_index",
    "cached_execute",
    "canonicalize",
    "compile",
    "detect_enrichable_columns",
    "discover_paths",
    "display_value",
    "emit_sparql",
    "execute",
    "instances_of_extended",
    "load_deployment",
    "load_turtle",
    "parse_query_text",
    "partition_results",
    "properties_of",
    "serialize_turtle",
    "subclass_closure",
    "suggest_concepts",
    "suggest_relations",
    "__version__",
]
