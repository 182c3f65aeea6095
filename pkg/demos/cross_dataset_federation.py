"""Join measurements and lab records that live in different datasets.

The expression ratios sit in the transcriptome dataset, the primer
records in the strain database. Neither dataset alone can answer
"genes with a log ratio above 1 that have a three-prime-region primer";
the union selector joins across them and the answer's provenance names
both sources.
"""

from pathlib import Path

from ontoquery import (
    Iri,
    Literal,
    Runtime,
    compile,
    display_value,
    execute,
    load_deployment,
)

EX = "http://example.org/parasite#"


def ex(name):
    return Iri(EX + name)


def main():
    fixtures = Path(__file__).resolve().parent.parent / "fixtures"
    rt = Runtime.load(load_deployment(fixtures / "deployment.toml"))

    b = rt.make_builder(ex("Gene"))
    b.add_literal_step(0, ex("log_base_2_ratio"))
    b.add_filter(1, ">", Literal("1", "integer"))
    b.add_object_step(0, ex("has_primer"), ex("Primer"))
    b.add_object_step(2, ex("has_region"), ex("ThreePrimeRegion"))
    plan = compile(b.query, rt.schema, rt.closure)

    for selector in ["strains", "transcriptome", "all"]:
        table = execute(plan, rt.closure, rt.store, selector)
        print(f"dataset {selector!r}: {len(table.rows)} row(s)")
        graphs = rt.store.graphs_for(selector)
        for row, provenance in zip(table.rows, table.provenance):
            gene = display_value(row[0], graphs)
            ratio = row[1].lexical
            primer = display_value(row[2], graphs)
            print(f"  {gene}  ratio={ratio}  {primer}  [from {provenance}]")


if __name__ == "__main__":
    main()
