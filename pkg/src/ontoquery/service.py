"""HTTP API over the engine: thin route adapters, server-side sessions,
and structured error payloads.

Every route wraps exactly one module operation; payload field names are
part of the external contract (docs/api.md) and must not drift.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable, Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .compiler import emit_sparql, variable_map
from .engine import (
    ALL_DATASETS,
    PartitionedResults,
    ResultTable,
    cached_execute,
    display_value,
    partition_results,
)
from .enrichment import EnrichmentJob, detect_enrichable_columns
from .errors import OntoQueryError, SessionNotFoundError
from .query import LiteralNode, PathQuery, QueryBuilder
from .rdf import Iri, Literal
from .reasoner import instances_of_extended
from .runtime import Runtime
from .suggest import annotate, discover_paths, suggest_concepts, suggest_relations

NOT_FOUND_CODES = {
    "session-not-found",
    "unknown-job",
    "unknown-dataset",
    "unknown-class",
}


@dataclass
class Session:
    session_id: str
    builder: QueryBuilder
    last_activity: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    # Set by execute; enrichment reads the session's latest table.
    last_result: Optional[tuple[ResultTable, PathQuery, str]] = None


class SessionManager:
    """Server-side session registry with idle expiry. Expired sessions
    are indistinguishable from ones that never existed."""

    def __init__(self, idle_seconds: float, clock: Callable[[], float] = time.monotonic):
        self.idle_seconds = idle_seconds
        self._clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, builder: QueryBuilder) -> Session:
        session = Session(
            session_id=uuid.uuid4().hex, builder=builder, last_activity=self._clock()
        )
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Session:
        now = self._clock()
        with self._lock:
            session = self._sessions.get(session_id)
            if session is not None and now - session.last_activity > self.idle_seconds:
                del self._sessions[session_id]
                session = None
            if session is None:
                raise SessionNotFoundError(f"no session {session_id!r}")
            session.last_activity = now
            return session


# ---------------------------------------------------------------------------
# Request bodies


class CreateSessionBody(BaseModel):
    rootConcept: str


class StepBody(BaseModel):
    parentId: int
    property: str
    targetClass: Optional[str] = None
    direction: str = "forward"


class SelectionBody(BaseModel):
    nodeId: int
    mode: str
    instances: list[str]


class FilterValue(BaseModel):
    datatype: str = "decimal"
    value: str


class FilterBody(BaseModel):
    nodeId: int
    comparator: str
    value: FilterValue


class EnrichmentBody(BaseModel):
    sessionId: str
    columnIndex: int


# ---------------------------------------------------------------------------
# Payload rendering


def _annotation_payload(annotation) -> dict:
    return {
        "description": annotation.description,
        "altLabels": annotation.alt_labels,
        "properties": annotation.properties,
    }


def _property_payload(prop) -> dict:
    return {
        "property": prop.iri.value,
        "label": prop.label,
        "kind": prop.kind,
        "datatype": prop.datatype,
        "valueKind": prop.value_kind,
        "domains": sorted(d.value for d in prop.domains),
        "ranges": sorted(r.value for r in prop.ranges),
    }


class Api:
    """Bundles the runtime with per-request helpers; create_app exposes
    it over FastAPI routes."""

    def __init__(self, runtime: Runtime, clock: Callable[[], float] = time.monotonic):
        self.runtime = runtime
        self.sessions = SessionManager(
            idle_seconds=runtime.deployment.session_idle_seconds, clock=clock
        )

    # -- helpers

    def _iri(self, raw: str) -> Iri:
        return Iri(raw)

    def _all_graphs(self):
        return self.runtime.store.graphs_for(ALL_DATASETS)

    def _display(self, term) -> str:
        return display_value(term, self._all_graphs())

    def _instance_payload(self, iri: Iri) -> dict:
        return {"iri": iri.value, "label": self._display(iri)}

    def _class_label(self, iri: Iri) -> str:
        info = self.runtime.schema.class_info(iri)
        return info.label if info else iri.local_name

    def query_view(self, builder: QueryBuilder) -> dict:
        q = builder.query
        schema = self.runtime.schema
        variables = variable_map(q, schema)
        nodes = []
        for node in q.nodes:
            edge = None
            if node.edge is not None:
                prop = schema.property_info(node.edge.property)
                edge = {
                    "parentId": node.edge.parent_id,
                    "property": node.edge.property.value,
                    "propertyLabel": prop.label if prop else node.edge.property.local_name,
                    "direction": node.edge.direction,
                }
            if isinstance(node, LiteralNode):
                nodes.append(
                    {
                        "id": node.node_id,
                        "kind": "literal",
                        "label": edge["propertyLabel"] if edge else node.property.local_name,
                        "property": node.property.value,
                        "datatype": node.datatype,
                        "variable": variables[node.node_id],
                        "edge": edge,
                        "filters": [
                            {
                                "comparator": f.comparator,
                                "value": f.value.lexical,
                                "datatype": f.value.datatype,
                            }
                            for f in node.filters
                        ],
                    }
                )
            else:
                info = schema.class_info(node.class_iri)
                selection = None
                if node.selection is not None:
                    selection = {
                        "mode": node.selection.mode,
                        "instances": [
                            self._instance_payload(i) for i in node.selection.instances
                        ],
                    }
                nodes.append(
                    {
                        "id": node.node_id,
                        "kind": "class",
                        "class": node.class_iri.value,
                        "label": info.label if info else node.class_iri.local_name,
                        "variable": variables[node.node_id],
                        "edge": edge,
                        "selection": selection,
                    }
                )
        return {"nodes": nodes, "historyDepth": builder.history_depth}

    def table_payload(
        self, table: ResultTable, witnesses: Optional[tuple[dict[int, Iri], ...]] = None
    ) -> dict:
        rows = []
        for i, (row, provenance) in enumerate(zip(table.rows, table.provenance)):
            values = []
            for term in row:
                if isinstance(term, Literal):
                    values.append(
                        {
                            "kind": "literal",
                            "value": term.lexical,
                            "datatype": term.datatype,
                            "display": term.lexical,
                        }
                    )
                else:
                    values.append(
                        {
                            "kind": "iri",
                            "value": term.value if isinstance(term, Iri) else str(term),
                            "display": self._display(term),
                        }
                    )
            entry = {"values": values, "provenance": provenance}
            if witnesses is not None:
                entry["witness"] = {
                    str(node_id): {"iri": w.value, "label": self._class_label(w)}
                    for node_id, w in witnesses[i].items()
                }
            rows.append(entry)
        return {
            "columns": [{"nodeId": nid, "label": label} for nid, label in table.columns],
            "rows": rows,
        }

    def execute_payload(
        self,
        dataset: str,
        cache_hit: bool,
        partitioned: PartitionedResults,
        q: PathQuery,
    ) -> dict:
        full_table = ResultTable(
            columns=partitioned.specific.columns,
            rows=partitioned.specific.rows + partitioned.general.rows,
            provenance=partitioned.specific.provenance + partitioned.general.provenance,
        )
        enrichable = detect_enrichable_columns(full_table, q, self.runtime.schema)
        return {
            "dataset": dataset,
            "cacheHit": cache_hit,
            "specific": self.table_payload(partitioned.specific),
            "general": self.table_payload(partitioned.general, partitioned.general_witness),
            "enrichableColumns": [
                {"columnIndex": c.column_index, "reason": c.reason} for c in enrichable
            ],
        }

    def job_payload(self, job: EnrichmentJob) -> dict:
        report = None
        if job.report is not None:
            report = [
                {"row": ordinal, "summary": summary, "score": str(score)}
                for ordinal, summary, score in job.report
            ]
        return {
            "jobId": job.job_id,
            "status": job.status,
            "columnIndex": job.column_index,
            "rowOrdinals": list(job.row_ordinals),
            "report": report,
            "diagnostic": job.diagnostic,
        }


def create_app(runtime: Runtime, clock: Callable[[], float] = time.monotonic) -> FastAPI:
    api = Api(runtime, clock=clock)
    app = FastAPI(title="ontoquery", docs_url=None, redoc_url=None)
    app.state.api = api
    # the browser UI is served as static files from any host
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(OntoQueryError)
    async def _domain_error(_request: Request, exc: OntoQueryError):
        status = 404 if exc.code in NOT_FOUND_CODES else 400
        return JSONResponse(
            status_code=status, content={"error": {"code": exc.code, "message": str(exc)}}
        )

    @app.exception_handler(ValueError)
    async def _value_error(_request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "invalid-request", "message": str(exc)}},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": "invalid-request", "message": str(exc)}},
        )

    rt = api.runtime

    @app.get("/datasets")
    def datasets():
        return {
            "datasets": [
                {"id": d.dataset_id, "label": d.label, "tripleCount": d.triple_count}
                for d in rt.dataset_descriptors()
            ]
        }

    @app.get("/suggest")
    def suggest(q: str = "", limit: Optional[int] = None):
        cap = rt.deployment.suggestion_limit
        effective = cap if limit is None else max(1, min(limit, cap))
        found = suggest_concepts(rt.schema, rt.closure, q, limit=effective)
        return {
            "suggestions": [
                {
                    "class": s.class_iri.value,
                    "label": s.label,
                    "matchKind": s.match_kind,
                    "annotation": _annotation_payload(s.annotation),
                }
                for s in found
            ]
        }

    @app.get("/concepts/{iri:path}/annotation")
    def concept_annotation(iri: str):
        annotation = annotate(rt.schema, rt.closure, api._iri(iri))
        return _annotation_payload(annotation)

    @app.get("/concepts/{iri:path}/relations")
    def concept_relations(iri: str, direction: str = "outgoing"):
        props = suggest_relations(rt.schema, rt.closure, api._iri(iri), direction)
        return {"relations": [_property_payload(p) for p in props]}

    @app.get("/concepts/{iri:path}/instances")
    def concept_instances(iri: str, dataset: str = ALL_DATASETS):
        graphs = rt.store.graphs_for(dataset)
        ext = instances_of_extended(rt.closure, api._iri(iri), graphs)
        direct = sorted(ext.direct, key=lambda i: i.value)
        via = sorted(ext.via_subclass.items(), key=lambda kv: kv[0].value)
        return {
            "direct": [api._instance_payload(i) for i in direct],
            "viaSubclass": [
                dict(api._instance_payload(i), admittedBy=api._instance_payload(w))
                for i, w in via
            ],
        }

    @app.get("/paths")
    def paths(request: Request, to: str, max_length: Optional[int] = Query(None, alias="max")):
        # "from" is a Python keyword, so it is read from raw query params.
        start = request.query_params.get("from")
        if start is None:
            raise ValueError("query parameter 'from' is required")
        limit = rt.deployment.path_max_length if max_length is None else max_length
        found = discover_paths(
            rt.schema, rt.closure, api._iri(start), api._iri(to), max_length=limit
        )
        return {
            "paths": [
                {
                    "length": p.length,
                    "steps": [
                        {
                            "subject": s.subject.value,
                            "property": s.property.value,
                            "propertyLabel": (
                                rt.schema.property_info(s.property).label
                                if rt.schema.property_info(s.property)
                                else s.property.local_name
                            ),
                            "object": s.object.value,
                            "direction": s.direction,
                        }
                        for s in p.steps
                    ],
                }
                for p in found
            ]
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        builder = rt.make_builder(api._iri(body.rootConcept))
        session = api.sessions.create(builder)
        return {"sessionId": session.session_id, "query": api.query_view(builder)}

    @app.post("/sessions/{session_id}/steps")
    def add_step(session_id: str, body: StepBody):
        session = api.sessions.get(session_id)
        with session.lock:
            prop = api._iri(body.property)
            info = rt.schema.property_info(prop)
            if info is not None and info.kind == "data":
                node_id = session.builder.add_literal_step(body.parentId, prop)
            else:
                if body.targetClass is None:
                    raise ValueError("targetClass is required for object properties")
                node_id = session.builder.add_object_step(
                    body.parentId, prop, api._iri(body.targetClass), direction=body.direction
                )
            return {"nodeId": node_id, "query": api.query_view(session.builder)}

    @app.post("/sessions/{session_id}/selection")
    def set_selection(session_id: str, body: SelectionBody):
        session = api.sessions.get(session_id)
        with session.lock:
            session.builder.set_selection(
                body.nodeId, body.mode, [api._iri(i) for i in body.instances]
            )
            return {"query": api.query_view(session.builder)}

    @app.post("/sessions/{session_id}/filter")
    def add_filter(session_id: str, body: FilterBody):
        session = api.sessions.get(session_id)
        with session.lock:
            value = Literal(lexical=body.value.value, datatype=body.value.datatype)
            session.builder.add_filter(body.nodeId, body.comparator, value)
            return {"query": api.query_view(session.builder)}

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str):
        session = api.sessions.get(session_id)
        with session.lock:
            session.builder.undo()
            return {"query": api.query_view(session.builder)}

    @app.delete("/sessions/{session_id}/nodes/{node_id}")
    def remove_node(session_id: str, node_id: int):
        session = api.sessions.get(session_id)
        with session.lock:
            session.builder.remove_node(node_id)
            return {"query": api.query_view(session.builder)}

    @app.get("/sessions/{session_id}/sparql")
    def sparql(session_id: str):
        session = api.sessions.get(session_id)
        with session.lock:
            emitted = emit_sparql(session.builder.query, rt.schema)
            return {
                "text": emitted.text,
                "variables": {str(k): v for k, v in emitted.variable_map.items()},
            }

    @app.post("/sessions/{session_id}/execute")
    def execute(session_id: str, dataset: str = ALL_DATASETS):
        session = api.sessions.get(session_id)
        with session.lock:
            q = session.builder.query
            table, hit = cached_execute(
                q, rt.schema, rt.closure, rt.store, dataset, rt.cache
            )
            partitioned = partition_results(table, q, rt.closure, rt.store, dataset)
            session.last_result = (table, q, dataset)
            return api.execute_payload(dataset, hit, partitioned, q)

    @app.post("/enrichments", status_code=202)
    def submit_enrichment(body: EnrichmentBody):
        session = api.sessions.get(body.sessionId)
        with session.lock:
            if session.last_result is None:
                raise ValueError("execute the session's query before enriching")
            table, q, _ = session.last_result
        job = rt.jobs.submit(table, q, rt.schema, body.columnIndex, rt.alignment_service)
        return api.job_payload(job)

    @app.get("/enrichments/{job_id}")
    def poll_enrichment(job_id: str):
        return api.job_payload(rt.jobs.poll(job_id))

    return app
