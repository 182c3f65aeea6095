"""Everything a running deployment holds in memory: parsed schema,
reasoned closure, loaded datasets, cache, and the enrichment registry.

Loading is all-or-nothing: any unreadable or unparseable file aborts
before a store exists, so a process never serves a partial registry.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from .config import Deployment
from .engine import ALL_DATASETS, DatasetStore, ResultCache
from .enrichment import (
    AlignmentService,
    HttpAlignmentService,
    JobRegistry,
    StubAlignmentService,
)
from .query import QueryBuilder
from .rdf import Graph, Iri
from .reasoner import SubclassClosure, instances_of_extended, subclass_closure
from .schema import SchemaIndex, build_schema_index
from .turtle import load_turtle

log = logging.getLogger(__name__)

API_KEY_ENV = "ONTOQUERY_ALIGNMENT_API_KEY"


@dataclass(frozen=True)
class DatasetDescriptor:
    dataset_id: str
    label: str
    triple_count: int


class Runtime:
    def __init__(
        self,
        deployment: Deployment,
        schema_graph: Graph,
        schema: SchemaIndex,
        closure: SubclassClosure,
        store: DatasetStore,
        service: AlignmentService,
    ):
        self.deployment = deployment
        self.schema_graph = schema_graph
        self.schema = schema
        self.closure = closure
        self.store = store
        self.cache = ResultCache(capacity=deployment.cache_capacity)
        self.jobs = JobRegistry()
        self.alignment_service = service

    @classmethod
    def load(cls, deployment: Deployment) -> "Runtime":
        schema_graph = load_turtle(deployment.schema_path.read_text(), "schema")
        schema = build_schema_index(schema_graph)
        closure = subclass_closure(schema)

        graphs: dict[str, Graph] = {}
        labels: dict[str, str] = {}
        for spec in deployment.datasets:
            graphs[spec.dataset_id] = load_turtle(spec.path.read_text(), spec.dataset_id)
            labels[spec.dataset_id] = spec.label
        store = DatasetStore()
        store.load(graphs, labels)

        if deployment.enrichment.service == "http":
            service: AlignmentService = HttpAlignmentService(
                base_url=deployment.enrichment.base_url,
                timeout=deployment.enrichment.timeout,
                api_key=os.environ.get(API_KEY_ENV),
            )
        else:
            service = StubAlignmentService()
        log.info(
            "loaded schema (%d classes) and %d dataset(s)",
            len(schema.classes),
            len(graphs),
        )
        return cls(deployment, schema_graph, schema, closure, store, service)

    def dataset_descriptors(self) -> list[DatasetDescriptor]:
        """One descriptor per dataset plus the union pseudo-entry."""
        out = [
            DatasetDescriptor(
                dataset_id=i,
                label=self.store.label_of(i),
                triple_count=len(self.store.graph(i).triples),
            )
            for i in self.store.ids()
        ]
        total = sum(d.triple_count for d in out)
        out.append(DatasetDescriptor(dataset_id=ALL_DATASETS, label="all datasets", triple_count=total))
        return out

    def instance_lookup(self, cls: Iri) -> set[Iri]:
        # Selections are validated against every loaded dataset, since a
        # session picks its dataset only at execution time.
        graphs = self.store.graphs_for(ALL_DATASETS)
        return instances_of_extended(self.closure, cls, graphs).all_instances()

    def make_builder(self, root_class: Iri) -> QueryBuilder:
        return QueryBuilder(
            self.schema, self.closure, root_class, instance_lookup=self.instance_lookup
        )
