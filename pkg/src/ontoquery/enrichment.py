"""Sequence-column detection and asynchronous alignment enrichment.

Columns qualify only when the schema marks the bound property as a
nucleotide sequence AND at least one row actually looks like one; the
dual gate keeps identifier columns from being flagged.
"""

from __future__ import annotations

import logging
import re
import threading
import time
import uuid
from dataclasses import dataclass
from decimal import Decimal
from typing import Callable, Optional

from .engine import ResultTable
from .errors import UnflaggedColumnError, UnknownJobError
from .query import LiteralNode, PathQuery
from .rdf import Literal
from .schema import SchemaIndex

log = logging.getLogger(__name__)

SEQUENCE_VALUE_KIND = "nucleotide-sequence"
DEFAULT_REPORT_TTL_SECONDS = 3600.0

_SEQUENCE_RE = re.compile(r"[ACGTN]+", re.IGNORECASE)


def looks_like_sequence(text: str) -> bool:
    return bool(text) and _SEQUENCE_RE.fullmatch(text) is not None


@dataclass(frozen=True)
class EnrichableColumn:
    column_index: int
    # The schema annotation that justified flagging this column.
    reason: str


def detect_enrichable_columns(
    table: ResultTable, q: PathQuery, schema: SchemaIndex
) -> list[EnrichableColumn]:
    """Columns bound to a sequence-kind datatype property with at least
    one row passing the alphabet check, in column order."""
    flagged = []
    nodes = {n.node_id: n for n in q.nodes}
    for index, (node_id, _) in enumerate(table.columns):
        node = nodes.get(node_id)
        if not isinstance(node, LiteralNode):
            continue
        prop = schema.property_info(node.property)
        if prop is None or prop.value_kind != SEQUENCE_VALUE_KIND:
            continue
        cells = (row[index] for row in table.rows)
        if any(isinstance(c, Literal) and looks_like_sequence(c.lexical) for c in cells):
            flagged.append(
                EnrichableColumn(column_index=index, reason=f"{prop.label}: {SEQUENCE_VALUE_KIND}")
            )
    return flagged


@dataclass(frozen=True)
class AlignmentHit:
    summary: str
    score: Decimal


class AlignmentService:
    """Something that can align one nucleotide sequence."""

    def align(self, sequence: str) -> AlignmentHit:
        raise NotImplementedError


class StubAlignmentService(AlignmentService):
    """Deterministic in-process service: the summary is the reversed
    sequence and the score is its length, so reports can be checked by
    hand. ``gate`` (when given) must be set before any call returns,
    which lets tests observe the non-blocking submit contract."""

    def __init__(self, gate: Optional[threading.Event] = None, fail_with: Optional[str] = None):
        self.gate = gate
        self.fail_with = fail_with
        self.calls = 0

    def align(self, sequence: str) -> AlignmentHit:
        if self.gate is not None:
            self.gate.wait()
        self.calls += 1
        if self.fail_with is not None:
            raise RuntimeError(self.fail_with)
        return AlignmentHit(summary=sequence[::-1], score=Decimal(len(sequence)))


class HttpAlignmentService(AlignmentService):
    """Client for the NCBI URL API. Network-dependent, so it is never
    constructed unless deployment configuration asks for it, and no test
    exercises it."""

    def __init__(self, base_url: str, timeout: float = 30.0, api_key: Optional[str] = None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.api_key = api_key

    def align(self, sequence: str) -> AlignmentHit:
        import httpx

        params = {"CMD": "Put", "PROGRAM": "blastn", "DATABASE": "nt", "QUERY": sequence}
        if self.api_key:
            params["API_KEY"] = self.api_key
        with httpx.Client(timeout=self.timeout) as client:
            put = client.get(self.base_url, params=params)
            put.raise_for_status()
            rid = _extract_field(put.text, "RID")
            if rid is None:
                raise RuntimeError("alignment service returned no request id")
            get = client.get(
                self.base_url,
                params={"CMD": "Get", "RID": rid, "FORMAT_TYPE": "Tabular"},
            )
            get.raise_for_status()
            identifier, score = _extract_best_hit(get.text)
            return AlignmentHit(summary=identifier, score=score)


def _extract_field(text: str, name: str) -> Optional[str]:
    m = re.search(rf"^\s*{name}\s*=\s*(\S+)", text, re.MULTILINE)
    return m.group(1) if m else None


def _extract_best_hit(text: str) -> tuple[str, Decimal]:
    # Tabular rows: query id, subject id, ... bit score last.
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) >= 12:
            return parts[1], Decimal(parts[11])
    raise RuntimeError("alignment service returned no hits")


JOB_STATES = ("pending", "running", "done", "failed")


@dataclass
class EnrichmentJob:
    job_id: str
    status: str
    column_index: int
    row_ordinals: tuple[int, ...]
    # (row ordinal, match summary, score) per enriched row.
    report: Optional[tuple[tuple[int, str, Decimal], ...]] = None
    diagnostic: Optional[str] = None
    finished_at: Optional[float] = None

    def snapshot(self) -> "EnrichmentJob":
        return EnrichmentJob(
            job_id=self.job_id,
            status=self.status,
            column_index=self.column_index,
            row_ordinals=self.row_ordinals,
            report=self.report,
            diagnostic=self.diagnostic,
            finished_at=self.finished_at,
        )


class JobRegistry:
    """Owns enrichment jobs: submission spawns a worker thread, polling
    returns snapshots, finished reports expire after ``report_ttl``."""

    def __init__(
        self,
        report_ttl: float = DEFAULT_REPORT_TTL_SECONDS,
        clock: Callable[[], float] = time.monotonic,
    ):
        self.report_ttl = report_ttl
        self._clock = clock
        self._jobs: dict[str, EnrichmentJob] = {}
        self._lock = threading.Lock()

    def submit(
        self,
        table: ResultTable,
        q: PathQuery,
        schema: SchemaIndex,
        column_index: int,
        service: AlignmentService,
    ) -> EnrichmentJob:
        """Start enriching one flagged column. Returns a pending job
        immediately; the service call proceeds on its own thread."""
        flagged = {c.column_index for c in detect_enrichable_columns(table, q, schema)}
        if column_index not in flagged:
            raise UnflaggedColumnError(
                f"column {column_index} is not flagged as enrichable for this table"
            )
        ordinals = []
        sequences = []
        for ordinal, row in enumerate(table.rows):
            cell = row[column_index]
            if isinstance(cell, Literal) and cell.lexical:
                ordinals.append(ordinal)
                sequences.append(cell.lexical)
        job = EnrichmentJob(
            job_id=uuid.uuid4().hex,
            status="pending",
            column_index=column_index,
            row_ordinals=tuple(ordinals),
        )
        with self._lock:
            self._jobs[job.job_id] = job
        worker = threading.Thread(
            target=self._run, args=(job.job_id, tuple(zip(ordinals, sequences)), service),
            daemon=True,
        )
        worker.start()
        return self.poll(job.job_id)

    def _run(
        self,
        job_id: str,
        work: tuple[tuple[int, str], ...],
        service: AlignmentService,
    ) -> None:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                return
            job.status = "running"
        try:
            report = []
            for ordinal, sequence in work:
                hit = service.align(sequence)
                report.append((ordinal, hit.summary, hit.score))
            with self._lock:
                job.report = tuple(report)
                job.status = "done"
                job.finished_at = self._clock()
        except Exception as exc:
            log.warning("enrichment job %s failed: %s", job_id, exc)
            with self._lock:
                job.status = "failed"
                job.diagnostic = str(exc)
                job.finished_at = self._clock()

    def poll(self, job_id: str) -> EnrichmentJob:
        with self._lock:
            job = self._jobs.get(job_id)
            if job is not None and job.finished_at is not None:
                if self._clock() - job.finished_at > self.report_ttl:
                    del self._jobs[job_id]
                    job = None
            if job is None:
                raise UnknownJobError(f"no enrichment job {job_id!r}")
            return job.snapshot()
