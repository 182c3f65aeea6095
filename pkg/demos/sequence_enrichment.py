"""Flag sequence-valued columns and enrich them in the background.

The primer-sequence property is annotated as carrying nucleotide
sequences, so its result column is offered for alignment. Submission
returns immediately; the job runs on a worker thread and the report is
fetched by polling. The deterministic stub service stands in for a real
aligner: it reports the reversed sequence and scores it by length.
"""

import time
from pathlib import Path

from ontoquery import (
    Iri,
    JobRegistry,
    Runtime,
    StubAlignmentService,
    compile,
    detect_enrichable_columns,
    display_value,
    execute,
    load_deployment,
)

EX = "http://example.org/parasite#"


def main():
    fixtures = Path(__file__).resolve().parent.parent / "fixtures"
    rt = Runtime.load(load_deployment(fixtures / "deployment.toml"))

    b = rt.make_builder(Iri(EX + "Primer"))
    b.add_literal_step(0, Iri(EX + "primer_sequence"))
    q = b.query
    table = execute(compile(q, rt.schema, rt.closure), rt.closure, rt.store, "strains")

    flagged = detect_enrichable_columns(table, q, rt.schema)
    for column in flagged:
        label = table.columns[column.column_index][1]
        print(f"column {column.column_index} ({label!r}) is enrichable: {column.reason}")

    registry = JobRegistry()
    job = registry.submit(table, q, rt.schema, flagged[0].column_index, StubAlignmentService())
    print(f"submitted job {job.job_id} covering rows {list(job.row_ordinals)}")

    while True:
        job = registry.poll(job.job_id)
        if job.status in ("done", "failed"):
            break
        time.sleep(0.05)

    print(f"status: {job.status}")
    graphs = rt.store.graphs_for("strains")
    for ordinal, summary, score in job.report:
        primer = display_value(table.rows[ordinal][0], graphs)
        sequence = table.rows[ordinal][1].lexical
        print(f"  {primer}: {sequence} -> {summary} (score {score})")


if __name__ == "__main__":
    main()
