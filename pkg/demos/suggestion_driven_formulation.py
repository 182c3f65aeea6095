"""Formulate a query using nothing but the suggestion machinery.

Starting from a typed label fragment, every decision is made from what
the tooling offers: the root class comes from autocomplete, each edge
from the relation suggestions for the current class, and the final
target class from autocomplete again. The result is the homology walk
"oligos on the array whose gene has a homolog with a three-prime-region
primer".
"""

from pathlib import Path

from ontoquery import (
    Runtime,
    compile,
    discover_paths,
    display_value,
    execute,
    load_deployment,
    suggest_concepts,
    suggest_relations,
)


def pick_relation(rt, cls, direction, label):
    offered = suggest_relations(rt.schema, rt.closure, cls, direction)
    print(f"  {direction} from {rt.schema.class_info(cls).label!r}: "
          + ", ".join(p.label for p in offered))
    return next(p for p in offered if p.label == label)


def main():
    fixtures = Path(__file__).resolve().parent.parent / "fixtures"
    rt = Runtime.load(load_deployment(fixtures / "deployment.toml"))

    print('autocomplete "oligo":')
    (root,) = suggest_concepts(rt.schema, rt.closure, "oligo")
    print(f"  -> {root.label} (matched by {root.match_kind})")
    b = rt.make_builder(root.class_iri)

    has_oligo = pick_relation(rt, root.class_iri, "incoming", "has oligonucleotide")
    (gene,) = has_oligo.domains
    b.add_object_step(0, has_oligo.iri, gene, direction="inverse")

    homolog = pick_relation(rt, gene, "outgoing", "is homologous to")
    (gene_range,) = homolog.ranges
    b.add_object_step(1, homolog.iri, gene_range)

    has_primer = pick_relation(rt, gene_range, "outgoing", "has primer")
    (primer,) = has_primer.ranges
    b.add_object_step(2, has_primer.iri, primer)

    has_region = pick_relation(rt, primer, "outgoing", "has region")
    (region,) = suggest_concepts(rt.schema, rt.closure, "three prime region")
    b.add_object_step(3, has_region.iri, region.class_iri)

    print("\nschema paths from the root to the primer class:")
    for path in discover_paths(rt.schema, rt.closure, root.class_iri, primer, max_length=3):
        arrows = " then ".join(
            f"{'' if s.direction == 'forward' else 'inverse '}"
            f"{rt.schema.property_info(s.property).label}"
            for s in path.steps
        )
        print(f"  length {path.length}: {arrows}")

    table = execute(compile(b.query, rt.schema, rt.closure), rt.closure, rt.store, "all")
    graphs = rt.store.graphs_for("all")
    print(f"\n{len(table.rows)} answer(s):")
    for row, provenance in zip(table.rows, table.provenance):
        cells = "  ".join(display_value(term, graphs) for term in row)
        print(f"  {cells}  [from {provenance}]")


if __name__ == "__main__":
    main()
