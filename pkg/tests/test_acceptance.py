"""Acceptance gate: one test per shipped guarantee.

Run with ``pytest tests/test_acceptance.py -v`` to get a pass/fail line
per guarantee. Every check goes through public entry points, and every
computed answer is compared against an independent oracle or a value
derivable from the fixture files by hand.
"""

import random
import threading
import time
from decimal import Decimal

from ontoquery.compiler import compile as compile_plan
from ontoquery.compiler import emit_sparql, parse_query_text
from ontoquery.engine import (
    DatasetStore,
    cached_execute,
    display_value,
    execute,
    partition_results,
)
from ontoquery.enrichment import (
    JobRegistry,
    StubAlignmentService,
    detect_enrichable_columns,
)
from ontoquery.errors import OntoQueryError
from ontoquery.query import ORDER_COMPARATORS, LiteralNode, canonicalize
from ontoquery.rdf import Graph, Iri, Literal
from ontoquery.reasoner import properties_of, subclass_closure
from ontoquery.schema import build_schema_index
from ontoquery.suggest import suggest_concepts, suggest_relations
from ontoquery.turtle import load_turtle, serialize_term
from ontoquery.vocab import RDF_TYPE

from helpers import (
    ex,
    oligo_homology_builder,
    process_chain_builder,
    random_query,
    random_schema_doc,
    random_world,
    ratio_primer_builder,
)
from oracles import bfs_closure, brute_force_answers, cycle_groups


def run(q, schema, closure, store, selector):
    return execute(compile_plan(q, schema, closure), closure, store, selector)


def test_knockout_chain_query_yields_only_subclass_admitted_clones(runtime):
    """The seven-node provenance chain finds both knockout clones, files
    them under general answers (admitted via the cloned-sample subclass,
    never as direct T.cruzi samples), and does so in under a second."""
    q = process_chain_builder(runtime).query
    started = time.perf_counter()
    table = run(q, runtime.schema, runtime.closure, runtime.store, "strains")
    parts = partition_results(table, q, runtime.closure, runtime.store, "strains")
    elapsed = time.perf_counter() - started

    assert parts.specific.rows == ()
    assert len(parts.general.rows) == 2
    graphs = runtime.store.graphs_for("strains")
    samples = {display_value(row[1], graphs) for row in parts.general.rows}
    assert samples == {"CloneID 10", "CloneID 12"}
    for witness in parts.general_witness:
        assert witness == {1: ex("ClonedSample")}
        assert runtime.schema.class_info(witness[1]).label == "cloned sample"
    assert elapsed < 1.0


def test_cross_dataset_join_finds_the_one_upregulated_three_prime_gene(runtime):
    """Ratio-above-one in one dataset joined with a three-prime-region
    primer in the other: exactly one gene satisfies both branches, and
    the union selector obeys the federation laws."""
    q = ratio_primer_builder(runtime).query
    schema, closure, store = runtime.schema, runtime.closure, runtime.store
    table = run(q, schema, closure, store, "all")

    assert len(table.rows) == 1
    assert table.rows[0][0] == ex("gene_506529_310")
    assert table.provenance[0] == "strains+transcriptome"
    assert list(table.rows) == brute_force_answers(
        q, store.graphs_for("all"), closure.reachable
    )

    # Union law: "all" behaves exactly like one merged graph.
    merged = Graph("merged", [t for g in store.graphs_for("all") for t in g.triples])
    solo = DatasetStore()
    solo.load({"merged": merged})
    assert run(q, schema, closure, solo, "all").rows == table.rows

    # Containment law: no single dataset invents rows the union lacks.
    for dataset in store.ids():
        assert set(run(q, schema, closure, store, dataset).rows) <= set(table.rows)


def test_homology_walk_is_formulable_from_suggestion_output_alone(runtime):
    """Starting from an autocomplete hit, every edge of the oligo query
    is taken verbatim from the relation suggestions, and the result
    executes cleanly against the fixture."""
    schema, closure = runtime.schema, runtime.closure

    def offered(cls, direction):
        return {p.iri: p for p in suggest_relations(schema, closure, cls, direction)}

    (root,) = suggest_concepts(schema, closure, "oligo")
    assert root.label == "microarray oligonucleotide"
    builder = runtime.make_builder(root.class_iri)

    has_oligo = offered(root.class_iri, "incoming")[ex("has_oligonucleotide")]
    (gene,) = has_oligo.domains
    builder.add_object_step(0, has_oligo.iri, gene, direction="inverse")

    homolog = offered(gene, "outgoing")[ex("is_homologous_to")]
    (gene_range,) = homolog.ranges
    builder.add_object_step(1, homolog.iri, gene_range)

    has_primer = offered(gene_range, "outgoing")[ex("has_primer")]
    (primer,) = has_primer.ranges
    builder.add_object_step(2, has_primer.iri, primer)

    has_region = offered(primer, "outgoing")[ex("has_region")]
    (region,) = suggest_concepts(schema, closure, "three prime region")
    builder.add_object_step(3, has_region.iri, region.class_iri)

    table = run(builder.query, schema, closure, runtime.store, "all")
    assert len(table.rows) == 1
    assert table.rows[0][0] == ex("oligo_511215_119")
    assert table.provenance[0] == "strains+transcriptome"


def test_evaluation_matches_a_brute_force_interpreter_on_random_worlds():
    """At least 100 random (schema, data, query) instances agree with an
    exhaustive generate-and-test oracle, inside the time budget."""
    def key(row):
        return tuple(serialize_term(term) for term in row)

    rng = random.Random(40400)
    started = time.perf_counter()
    checked = 0
    while checked < 120:
        schema, closure, store = random_world(rng)
        for _ in range(3):
            q = random_query(rng, schema, closure, store)
            table = run(q, schema, closure, store, "all")
            expected = brute_force_answers(q, store.graphs_for("all"), closure.reachable)
            assert len(table.rows) == len(set(table.rows))
            assert sorted(table.rows, key=key) == sorted(expected, key=key)
            checked += 1
    assert checked >= 100
    assert time.perf_counter() - started < 60.0


def test_subclass_closure_matches_a_bfs_oracle_on_random_hierarchies():
    """At least 100 random hierarchies, a healthy share of them cyclic:
    ancestor sets and cycle grouping match a breadth-first oracle."""
    rng = random.Random(50500)
    cyclic = 0
    for round_no in range(120):
        doc, classes, edges = random_schema_doc(rng)
        schema = build_schema_index(load_turtle(doc, f"doc-{round_no}"))
        closure = subclass_closure(schema)
        expected = bfs_closure(classes, edges)
        for cls in classes:
            assert closure.reachable[cls] == expected[cls]
        groups = cycle_groups(expected)
        assert set(closure.cycles) == groups
        if groups:
            cyclic += 1
    assert cyclic >= 10


def _asserted_types(graphs, instance):
    return {
        t.object
        for g in graphs
        for t in g.lookup(subject=instance, predicate=RDF_TYPE)
        if isinstance(t.object, Iri)
    }


def _check_partition(q, table, parts, closure, graphs):
    specific, general = set(parts.specific.rows), set(parts.general.rows)
    assert specific | general == set(table.rows)
    assert not (specific & general)
    assert len(parts.specific.rows) + len(parts.general.rows) == len(table.rows)

    class_nodes = [n for n in q.nodes if not isinstance(n, LiteralNode)]
    for row in parts.specific.rows:
        for node in class_nodes:
            assert node.class_iri in _asserted_types(graphs, row[node.node_id])
    for row, witness in zip(parts.general.rows, parts.general_witness):
        assert witness
        for node_id, cls in witness.items():
            node = q.node(node_id)
            types = _asserted_types(graphs, row[node_id])
            admitting = sorted(
                (t for t in types if t != node.class_iri and node.class_iri in closure.reachable[t]),
                key=lambda t: t.value,
            )
            assert node.class_iri not in types
            assert admitting and cls == admitting[0]


def test_answer_partition_is_a_disjoint_cover_with_sound_witnesses(runtime):
    """Specific and general answers are disjoint, together exhaust the
    result, and every witness is the smallest asserted proper subclass
    that admits the row. Checked on the fixture and on random worlds."""
    for builder_fn, selector in (
        (process_chain_builder, "strains"),
        (ratio_primer_builder, "all"),
        (oligo_homology_builder, "all"),
    ):
        q = builder_fn(runtime).query
        table = run(q, runtime.schema, runtime.closure, runtime.store, selector)
        parts = partition_results(table, q, runtime.closure, runtime.store, selector)
        graphs = runtime.store.graphs_for(selector)
        _check_partition(q, table, parts, runtime.closure, graphs)

    rng = random.Random(60600)
    for _ in range(40):
        schema, closure, store = random_world(rng)
        q = random_query(rng, schema, closure, store)
        table = run(q, schema, closure, store, "all")
        parts = partition_results(table, q, closure, store, "all")
        _check_partition(q, table, parts, closure, store.graphs_for("all"))


def test_query_text_round_trips_and_names_variables_stably(runtime):
    """Emitted text parses back to the same canonical query (200+ random
    cases plus the fixture queries), and the first chain variable is
    byte-exact."""
    emitted = emit_sparql(process_chain_builder(runtime).query, runtime.schema)
    assert emitted.variable_map[0] == "?any_cell_cloning1"
    assert emitted.text.splitlines()[1].startswith("SELECT ?any_cell_cloning1 ")

    for builder_fn in (process_chain_builder, ratio_primer_builder, oligo_homology_builder):
        q = builder_fn(runtime).query
        text = emit_sparql(q, runtime.schema).text
        back = parse_query_text(text, runtime.schema, runtime.closure)
        assert canonicalize(back, "all") == canonicalize(q, "all")
        assert emit_sparql(back, runtime.schema).text == text

    rng = random.Random(70700)
    rounds = 0
    while rounds < 200:
        schema, closure, store = random_world(rng)
        for _ in range(4):
            q = random_query(rng, schema, closure, store)
            text = emit_sparql(q, schema).text
            back = parse_query_text(text, schema, closure)
            assert canonicalize(back, "all") == canonicalize(q, "all")
            assert emit_sparql(back, schema).text == text
            rounds += 1
    assert rounds >= 200


def test_result_cache_is_invisible_except_for_the_hit_flag(fresh_runtime):
    """Fifty mixed lookups with repeats: first sight of a key misses,
    every repeat hits, every answer equals a cache-free execution, and a
    dataset reload drops all prior entries."""
    rt = fresh_runtime
    pool = [
        (process_chain_builder(rt).query, "strains"),
        (process_chain_builder(rt).query, "all"),
        (ratio_primer_builder(rt).query, "all"),
        (ratio_primer_builder(rt).query, "transcriptome"),
        (oligo_homology_builder(rt).query, "all"),
    ]
    rng = random.Random(80800)
    seen = set()
    for step in range(50):
        if step == 25:
            rt.store.load(
                {i: rt.store.graph(i) for i in rt.store.ids()},
                {i: rt.store.label_of(i) for i in rt.store.ids()},
            )
            seen.clear()
        q, selector = rng.choice(pool)
        key = canonicalize(q, selector)
        table, hit = cached_execute(q, rt.schema, rt.closure, rt.store, selector, rt.cache)
        assert hit == (key in seen)
        seen.add(key)
        assert table == run(q, rt.schema, rt.closure, rt.store, selector)


def _random_edit(rng, runtime, builder):
    """One random builder operation; returns whether the query changed.
    Raises like any interactive edit would."""
    schema, closure = runtime.schema, runtime.closure
    q = builder.query
    class_nodes = [n for n in q.nodes if not isinstance(n, LiteralNode)]
    roll = rng.random()
    if roll < 0.4:
        parent = rng.choice(class_nodes)
        props = properties_of(schema, closure, parent.class_iri)
        if not props:
            return False
        prop = rng.choice(props)
        if prop.kind == "data":
            builder.add_literal_step(parent.node_id, prop.iri)
            return True
        fillers = {
            f
            for c in schema.classes.values()
            for p, f in c.restriction_props
            if p == prop.iri
        }
        declared = rng.choice(sorted(prop.ranges | fillers, key=lambda c: c.value))
        pool = sorted(
            closure.descendants_of(declared) | closure.reachable[declared],
            key=lambda c: c.value,
        )
        builder.add_object_step(parent.node_id, prop.iri, rng.choice(pool))
        return True
    if roll < 0.55:
        literals = [n for n in q.nodes if isinstance(n, LiteralNode)]
        if not literals:
            return False
        node = rng.choice(literals)
        if node.datatype in ("integer", "decimal"):
            builder.add_filter(
                node.node_id,
                rng.choice(ORDER_COMPARATORS),
                Literal(str(rng.randint(0, 5)), "integer"),
            )
        else:
            builder.add_filter(node.node_id, rng.choice(("=", "!=")), Literal("ACGT", "string"))
        return True
    if roll < 0.7:
        node = rng.choice(class_nodes)
        pool = sorted(runtime.instance_lookup(node.class_iri), key=lambda i: i.value)
        if not pool:
            return False
        chosen = rng.sample(pool, rng.randint(1, min(2, len(pool))))
        builder.set_selection(node.node_id, rng.choice(["any-of", "none-of"]), chosen)
        return True
    if roll < 0.85:
        builder.remove_node(rng.choice(q.nodes).node_id)
        return True
    node = rng.choice(class_nodes)
    if node.selection is None:
        return False
    builder.clear_selection(node.node_id)
    return True


def test_undo_walks_back_through_earlier_snapshots_exactly(runtime):
    """Random edit sequences of up to 30 operations: undoing k times
    restores the query taken k successful edits ago, structurally; failed
    edits change nothing."""
    rng = random.Random(90900)
    for _ in range(30):
        root = rng.choice(["CellCloning", "Gene", "Primer"])
        builder = runtime.make_builder(ex(root))
        snapshots = [builder.query]
        for _ in range(rng.randint(1, 30)):
            try:
                changed = _random_edit(rng, runtime, builder)
            except OntoQueryError:
                changed = False
            if changed:
                snapshots.append(builder.query)
            else:
                assert builder.query == snapshots[-1]
        assert builder.history_depth == len(snapshots) - 1
        back = rng.randint(0, len(snapshots) - 1)
        for _ in range(back):
            builder.undo()
        assert builder.query == snapshots[-1 - back]


def _wait_for(registry, job_id, timeout=5.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        job = registry.poll(job_id)
        if job.status in ("done", "failed"):
            return job
        time.sleep(0.01)
    raise AssertionError("enrichment job did not finish in time")


def test_enrichment_submits_without_blocking_and_contains_failures(runtime):
    """Submission returns while the service is still blocked; the finished
    report lines up row-for-row with the table; a failing service marks
    only its own job and leaves others untouched."""
    builder = runtime.make_builder(ex("Primer"))
    builder.add_literal_step(0, ex("primer_sequence"))
    q = builder.query
    table = run(q, runtime.schema, runtime.closure, runtime.store, "strains")
    flagged = detect_enrichable_columns(table, q, runtime.schema)
    assert [c.column_index for c in flagged] == [1]

    registry = JobRegistry()
    gate = threading.Event()
    started = time.perf_counter()
    job = registry.submit(table, q, runtime.schema, 1, StubAlignmentService(gate=gate))
    assert time.perf_counter() - started < 1.0
    snapshot = registry.poll(job.job_id)
    assert snapshot.status in ("pending", "running")
    assert snapshot.report is None
    gate.set()
    done = _wait_for(registry, job.job_id)

    sequences = {i: row[1].lexical for i, row in enumerate(table.rows)}
    assert [entry[0] for entry in done.report] == sorted(sequences)
    for ordinal, summary, score in done.report:
        assert summary == sequences[ordinal][::-1]
        assert score == Decimal(len(sequences[ordinal]))

    bad = registry.submit(
        table, q, runtime.schema, 1, StubAlignmentService(fail_with="remote unavailable")
    )
    good = registry.submit(table, q, runtime.schema, 1, StubAlignmentService())
    bad_done = _wait_for(registry, bad.job_id)
    good_done = _wait_for(registry, good.job_id)
    assert bad_done.status == "failed"
    assert bad_done.report is None
    assert "remote unavailable" in bad_done.diagnostic
    assert good_done.status == "done"
    assert len(good_done.report) == len(table.rows)
