"""Plan execution over loaded datasets, answer partitioning, and the
canonical-keyed result cache."""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .compiler import (
    EdgeJoin,
    EvaluationPlan,
    ExtendedTypeScan,
    FilterApply,
    InstanceRestrict,
    LiteralBind,
    compile as compile_plan,
)
from .errors import ExecutionCancelled, UnknownDatasetError
from .query import PathQuery, canonicalize
from .rdf import Graph, Iri, Literal, Term
from .reasoner import (
    SubclassClosure,
    admitting_subclass,
    asserted_types,
    instances_of_extended,
)
from .schema import SchemaIndex
from .turtle import serialize_term
from .vocab import RDF_TYPE, RDFS_LABEL

ALL_DATASETS = "all"
DEFAULT_CACHE_CAPACITY = 256


class DatasetStore:
    """Holds the loaded data graphs keyed by dataset id.

    Each (re)load bumps the version stamp so cached results tied to an
    earlier load can never be served again.
    """

    def __init__(self):
        self._graphs: dict[str, Graph] = {}
        self._labels: dict[str, str] = {}
        self._version = 0

    def load(self, graphs: dict[str, Graph], labels: Optional[dict[str, str]] = None) -> None:
        if ALL_DATASETS in graphs:
            raise UnknownDatasetError(f"{ALL_DATASETS!r} is reserved for the union selector")
        self._graphs = dict(graphs)
        self._labels = dict(labels or {})
        self._version += 1

    @property
    def version(self) -> int:
        return self._version

    def ids(self) -> list[str]:
        return sorted(self._graphs)

    def label_of(self, dataset_id: str) -> str:
        return self._labels.get(dataset_id, dataset_id)

    def graph(self, dataset_id: str) -> Graph:
        if dataset_id not in self._graphs:
            raise UnknownDatasetError(f"no dataset named {dataset_id!r}")
        return self._graphs[dataset_id]

    def graphs_for(self, selector: str) -> list[Graph]:
        """The evaluation universe: one graph, or every graph for the
        union selector."""
        if selector == ALL_DATASETS:
            return [self._graphs[i] for i in self.ids()]
        return [self.graph(selector)]

    def items_for(self, selector: str) -> list[tuple[str, Graph]]:
        if selector == ALL_DATASETS:
            return [(i, self._graphs[i]) for i in self.ids()]
        return [(selector, self.graph(selector))]


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[tuple[int, str], ...]
    rows: tuple[tuple[Term, ...], ...]
    provenance: tuple[str, ...]

    def column_index(self, node_id: int) -> int:
        for i, (nid, _) in enumerate(self.columns):
            if nid == node_id:
                return i
        raise KeyError(f"no column for node {node_id}")


@dataclass(frozen=True)
class PartitionedResults:
    specific: ResultTable
    general: ResultTable
    # One witness map per general row: node id -> the proper subclass
    # whose type assertion admitted that row's value.
    general_witness: tuple[dict[int, Iri], ...]


def _has_triple(graphs: Iterable[Graph], s: Term, p: Iri, o: Term) -> bool:
    return any(g.lookup(subject=s, predicate=p, obj=o) for g in graphs)


def _objects(graphs: Iterable[Graph], s: Term, p: Iri) -> list[Term]:
    out = []
    for g in graphs:
        for t in g.lookup(subject=s, predicate=p):
            out.append(t.object)
    return out


def _literal_matches(value: Literal, datatype: str) -> bool:
    if datatype in ("integer", "decimal"):
        return value.datatype in ("integer", "decimal")
    return value.datatype == datatype


def _compare(value: Literal, comparator: str, constant: Literal) -> bool:
    if value.numeric_value is not None and constant.numeric_value is not None:
        a, b = value.numeric_value, constant.numeric_value
    elif value.datatype == constant.datatype:
        a, b = value.lexical, constant.lexical
    else:
        return False
    if comparator == "=":
        return a == b
    if comparator == "!=":
        return a != b
    if comparator == "<":
        return a < b
    if comparator == "<=":
        return a <= b
    if comparator == ">":
        return a > b
    return a >= b


def _term_key(term: Term) -> str:
    return serialize_term(term)


def execute(
    plan: EvaluationPlan,
    closure: SubclassClosure,
    store: DatasetStore,
    selector: str,
    cancelled: Optional[Callable[[], bool]] = None,
) -> ResultTable:
    """Run the plan over the selected dataset(s) with nested-loop joins.

    Instances scanned for a node stay "pending" until a join or binding
    touches them, so a scan never materializes a cartesian product on its
    own. Rows are deduplicated and ordered lexicographically over term
    serializations; cancellation is honored between steps.
    """
    graphs = store.graphs_for(selector)
    rows: list[dict[int, Term]] = []
    pending: dict[int, set[Iri]] = {}
    started = False

    def check_cancel() -> None:
        if cancelled is not None and cancelled():
            raise ExecutionCancelled("query evaluation cancelled")

    def materialize(node_id: int) -> None:
        nonlocal rows, started
        if node_id not in pending:
            return
        candidates = sorted(pending.pop(node_id), key=_term_key)
        if not started:
            rows = [{node_id: c} for c in candidates]
            started = True
        else:
            rows = [{**r, node_id: c} for r in rows for c in candidates]

    for step in plan.steps:
        check_cancel()
        if isinstance(step, ExtendedTypeScan):
            ext = instances_of_extended(closure, step.class_iri, graphs)
            pending[step.node_id] = ext.all_instances()
        elif isinstance(step, EdgeJoin):
            s_id, p, o_id = step.subject_id, step.property, step.object_id
            if s_id in pending and o_id in pending:
                s_set, o_set = pending.pop(s_id), pending.pop(o_id)
                matched = []
                for g in graphs:
                    for t in g.lookup(predicate=p):
                        if t.subject in s_set and t.object in o_set:
                            matched.append({s_id: t.subject, o_id: t.object})
                if started:
                    rows = [{**r, **m} for r in rows for m in matched]
                else:
                    rows = matched
                    started = True
            elif s_id in pending or o_id in pending:
                if s_id in pending:
                    new_id, anchor_id, forward = s_id, o_id, False
                else:
                    new_id, anchor_id, forward = o_id, s_id, True
                allowed = pending.pop(new_id)
                expanded = []
                for r in rows:
                    anchor = r[anchor_id]
                    if forward:
                        values = _objects(graphs, anchor, p)
                    else:
                        values = [
                            t.subject for g in graphs for t in g.lookup(predicate=p, obj=anchor)
                        ]
                    for v in values:
                        if v in allowed:
                            expanded.append({**r, new_id: v})
                rows = expanded
            else:
                rows = [r for r in rows if _has_triple(graphs, r[s_id], p, r[o_id])]
        elif isinstance(step, InstanceRestrict):
            members = step.instances
            if step.node_id in pending:
                if step.op == "any-of":
                    pending[step.node_id] &= members
                else:
                    pending[step.node_id] -= members
            elif step.op == "any-of":
                rows = [r for r in rows if r[step.node_id] in members]
            else:
                rows = [r for r in rows if r[step.node_id] not in members]
        elif isinstance(step, LiteralBind):
            materialize(step.from_node)
            expanded = []
            for r in rows:
                for obj in _objects(graphs, r[step.from_node], step.property):
                    if isinstance(obj, Literal) and _literal_matches(obj, step.datatype):
                        expanded.append({**r, step.node_id: obj})
            rows = expanded
        elif isinstance(step, FilterApply):
            rows = [
                r
                for r in rows
                if isinstance(r[step.node_id], Literal)
                and _compare(r[step.node_id], step.comparator, step.value)
            ]

    check_cancel()
    for node_id in sorted(pending):
        materialize(node_id)

    node_order = [nid for nid, _ in plan.output_columns]
    seen = set()
    assembled = []
    for r in rows:
        tup = tuple(r[nid] for nid in node_order)
        if tup not in seen:
            seen.add(tup)
            assembled.append(tup)
    assembled.sort(key=lambda tup: tuple(_term_key(t) for t in tup))

    provenance = tuple(
        _row_provenance(tup, node_order, plan, closure, store, selector) for tup in assembled
    )
    return ResultTable(
        columns=plan.output_columns, rows=tuple(assembled), provenance=provenance
    )


def _row_provenance(
    row: tuple[Term, ...],
    node_order: list[int],
    plan: EvaluationPlan,
    closure: SubclassClosure,
    store: DatasetStore,
    selector: str,
) -> str:
    """Datasets that assert at least one of the row's witnessing triples,
    joined with '+' when a row spans several."""
    if selector != ALL_DATASETS:
        return selector
    position = {nid: i for i, nid in enumerate(node_order)}
    contributing = []
    for dataset_id, graph in store.items_for(selector):
        hit = False
        for step in plan.steps:
            if isinstance(step, ExtendedTypeScan):
                # Only a type assertion that admits the row counts.
                for t in graph.lookup(subject=row[position[step.node_id]], predicate=RDF_TYPE):
                    if (
                        isinstance(t.object, Iri)
                        and t.object in closure.reachable
                        and step.class_iri in closure.reachable[t.object]
                    ):
                        hit = True
                        break
            elif isinstance(step, EdgeJoin):
                if graph.lookup(
                    subject=row[position[step.subject_id]],
                    predicate=step.property,
                    obj=row[position[step.object_id]],
                ):
                    hit = True
            elif isinstance(step, LiteralBind):
                if graph.lookup(
                    subject=row[position[step.from_node]],
                    predicate=step.property,
                    obj=row[position[step.node_id]],
                ):
                    hit = True
            if hit:
                break
        if hit:
            contributing.append(dataset_id)
    return "+".join(contributing) if contributing else selector


def partition_results(
    table: ResultTable,
    q: PathQuery,
    closure: SubclassClosure,
    store: DatasetStore,
    selector: str,
) -> PartitionedResults:
    """Split rows into those typed under every queried class directly and
    those admitted somewhere only through a proper subclass."""
    graphs = store.graphs_for(selector)
    class_nodes = q.class_nodes()
    specific_rows, specific_prov = [], []
    general_rows, general_prov, witnesses = [], [], []
    for row, prov in zip(table.rows, table.provenance):
        row_witness: dict[int, Iri] = {}
        for node in class_nodes:
            value = row[table.column_index(node.node_id)]
            if not isinstance(value, Iri):
                continue
            types = asserted_types(value, graphs)
            if node.class_iri in types:
                continue
            witness = admitting_subclass(closure, node.class_iri, types)
            if witness is not None:
                row_witness[node.node_id] = witness
        if row_witness:
            general_rows.append(row)
            general_prov.append(prov)
            witnesses.append(row_witness)
        else:
            specific_rows.append(row)
            specific_prov.append(prov)
    return PartitionedResults(
        specific=ResultTable(table.columns, tuple(specific_rows), tuple(specific_prov)),
        general=ResultTable(table.columns, tuple(general_rows), tuple(general_prov)),
        general_witness=tuple(witnesses),
    )


class ResultCache:
    """LRU cache keyed by canonical query string, stamped with the
    dataset version that produced each entry. Stale stamps never hit."""

    def __init__(self, capacity: int = DEFAULT_CACHE_CAPACITY):
        if capacity < 1:
            raise ValueError("cache capacity must be positive")
        self.capacity = capacity
        self._entries: OrderedDict[str, tuple[ResultTable, int]] = OrderedDict()
        self._lock = threading.Lock()

    def lookup(self, key: str, version: int) -> Optional[ResultTable]:
        with self._lock:
            entry = self._entries.get(key)
            if entry is None:
                return None
            table, stamp = entry
            if stamp != version:
                del self._entries[key]
                return None
            self._entries.move_to_end(key)
            return table

    def store(self, key: str, version: int, table: ResultTable) -> None:
        with self._lock:
            self._entries[key] = (table, version)
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


def cached_execute(
    q: PathQuery,
    schema: SchemaIndex,
    closure: SubclassClosure,
    store: DatasetStore,
    selector: str,
    cache: ResultCache,
) -> tuple[ResultTable, bool]:
    """Answer from the cache when the canonical key and version both
    match; otherwise execute and remember. Failures are never stored."""
    key = canonicalize(q, selector)
    version = store.version
    hit = cache.lookup(key, version)
    if hit is not None:
        return hit, True
    plan = compile_plan(q, schema, closure)
    table = execute(plan, closure, store, selector)
    cache.store(key, version, table)
    return table, False


def display_value(term: Term, graphs: Iterable[Graph]) -> str:
    """Human-facing cell text: an instance's label when the data carries
    one, otherwise its local name; literals show their lexical form."""
    if isinstance(term, Literal):
        return term.lexical
    if isinstance(term, Iri):
        for g in graphs:
            for t in g.lookup(subject=term, predicate=RDFS_LABEL):
                if isinstance(t.object, Literal):
                    return t.object.lexical
        return term.local_name
    return f"_:{term.label}"
