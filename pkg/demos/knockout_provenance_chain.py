"""Walk the provenance chain of knockout experiments.

Builds the seven-node query "cell cloning processes, their sample
output, the four preceding process steps, and the targeted gene", runs
it over the strain database, and shows why every answer is a general
one: the clones are recorded as cloned samples, a subclass of the
queried T.cruzi sample class.
"""

from pathlib import Path

from ontoquery import (
    Iri,
    Runtime,
    compile,
    display_value,
    emit_sparql,
    execute,
    load_deployment,
    partition_results,
)

EX = "http://example.org/parasite#"


def ex(name):
    return Iri(EX + name)


def main():
    fixtures = Path(__file__).resolve().parent.parent / "fixtures"
    rt = Runtime.load(load_deployment(fixtures / "deployment.toml"))

    b = rt.make_builder(ex("CellCloning"))
    b.add_object_step(0, ex("has_output_value"), ex("TcruziSample"))
    b.add_object_step(0, ex("preceded_by"), ex("DrugSelection"))
    b.add_object_step(2, ex("preceded_by"), ex("Transfection"))
    b.add_object_step(3, ex("preceded_by"), ex("KnockoutPlasmidConstruction"))
    b.add_object_step(4, ex("preceded_by"), ex("SequenceExtraction"))
    b.add_object_step(5, ex("has_parameter"), ex("Gene"))

    print("query text:")
    print(emit_sparql(b.query, rt.schema).text)

    table = execute(compile(b.query, rt.schema, rt.closure), rt.closure, rt.store, "strains")
    parts = partition_results(table, b.query, rt.closure, rt.store, "strains")
    graphs = rt.store.graphs_for("strains")

    print(f"specific answers: {len(parts.specific.rows)}")
    print(f"general answers:  {len(parts.general.rows)}")
    for row, witness in zip(parts.general.rows, parts.general_witness):
        sample = display_value(row[1], graphs)
        gene = display_value(row[6], graphs)
        via = ", ".join(
            f"{rt.schema.class_info(cls).label} (node {node_id})"
            for node_id, cls in sorted(witness.items())
        )
        print(f"  {sample} <- {gene}   admitted via {via}")


if __name__ == "__main__":
    main()
