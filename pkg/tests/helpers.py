"""Shared builders and randomized generators for the test suite."""

from __future__ import annotations

import random

from ontoquery.engine import DatasetStore
from ontoquery.errors import OntoQueryError
from ontoquery.query import ORDER_COMPARATORS, LiteralNode, QueryBuilder
from ontoquery.rdf import Graph, Iri, Literal, Triple
from ontoquery.reasoner import instances_of_extended, properties_of, subclass_closure
from ontoquery.schema import ClassInfo, PropertyInfo, SchemaIndex
from ontoquery.vocab import RDF_TYPE

EX = "http://example.org/parasite#"


def ex(name: str) -> Iri:
    return Iri(EX + name)


def process_chain_builder(runtime) -> QueryBuilder:
    """The seven-node provenance chain: a cloning process, its sample
    output, five predecessor process steps, and the targeted gene."""
    b = runtime.make_builder(ex("CellCloning"))
    b.add_object_step(0, ex("has_output_value"), ex("TcruziSample"))
    b.add_object_step(0, ex("preceded_by"), ex("DrugSelection"))
    b.add_object_step(2, ex("preceded_by"), ex("Transfection"))
    b.add_object_step(3, ex("preceded_by"), ex("KnockoutPlasmidConstruction"))
    b.add_object_step(4, ex("preceded_by"), ex("SequenceExtraction"))
    b.add_object_step(5, ex("has_parameter"), ex("Gene"))
    return b


def ratio_primer_builder(runtime) -> QueryBuilder:
    """Cross-dataset join: genes with log ratio > 1 in one dataset and a
    three-prime-region primer in the other."""
    b = runtime.make_builder(ex("Gene"))
    b.add_literal_step(0, ex("log_base_2_ratio"))
    b.add_filter(1, ">", Literal("1", "integer"))
    b.add_object_step(0, ex("has_primer"), ex("Primer"))
    b.add_object_step(2, ex("has_region"), ex("ThreePrimeRegion"))
    return b


def oligo_homology_builder(runtime) -> QueryBuilder:
    """Oligo-rooted walk back through homology to a primer region."""
    b = runtime.make_builder(ex("MicroarrayOligonucleotide"))
    b.add_object_step(0, ex("has_oligonucleotide"), ex("Gene"), direction="inverse")
    b.add_object_step(1, ex("is_homologous_to"), ex("Gene"))
    b.add_object_step(2, ex("has_primer"), ex("Primer"))
    b.add_object_step(3, ex("has_region"), ex("ThreePrimeRegion"))
    return b


# ---------------------------------------------------------------------------
# Randomized schema documents (for closure checks).

RDFS_PREFIX = "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
OWL_PREFIX = "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"


def random_schema_doc(rng: random.Random, max_classes: int = 12):
    """A random class hierarchy as Turtle text.

    Returns (document, class IRIs, direct subclass edge list). Roughly
    one document in three contains at least one subclass cycle.
    """
    n = rng.randint(2, max_classes)
    base = "http://example.org/rand#"
    names = [f"C{i}" for i in range(n)]
    classes = [Iri(base + name) for name in names]
    edges = []
    for i in range(1, n):
        if rng.random() < 0.7:
            parent = rng.randrange(i)
            edges.append((classes[i], classes[parent]))
        if rng.random() < 0.15:
            other = rng.randrange(n)
            if other != i:
                edges.append((classes[i], classes[other]))
    if rng.random() < 0.3 and n >= 3:
        # Deliberate cycle among three classes.
        a, b, c = rng.sample(range(n), 3)
        edges += [
            (classes[a], classes[b]),
            (classes[b], classes[c]),
            (classes[c], classes[a]),
        ]
    edges = sorted(set(edges), key=lambda e: (e[0].value, e[1].value))

    lines = [RDFS_PREFIX, OWL_PREFIX, f"@prefix r: <{base}> .\n"]
    for i, name in enumerate(names):
        keyword = "owl:Class" if rng.random() < 0.5 else "rdfs:Class"
        lines.append(f"r:{name} a {keyword} .\n")
    for child, parent in edges:
        lines.append(f"r:{child.local_name} rdfs:subClassOf r:{parent.local_name} .\n")
    return "".join(lines), classes, edges


# ---------------------------------------------------------------------------
# Randomized schema + instance worlds (for evaluator checks).


def random_world(rng: random.Random, max_classes: int = 10, max_triples: int = 200):
    """A small random schema with typed instances spread over one to
    three datasets. Returns (schema index, closure, store)."""
    base = "http://example.org/world#"
    n_classes = rng.randint(3, max_classes)
    classes = [Iri(base + f"K{i}") for i in range(n_classes)]

    schema = SchemaIndex()
    for c in classes:
        schema.classes[c] = ClassInfo(iri=c, label=c.local_name.lower())
    for i in range(1, n_classes):
        if rng.random() < 0.6:
            parent = classes[rng.randrange(i)]
            schema.direct_subclass_edges.add((classes[i], parent))

    object_props = []
    for i in range(rng.randint(1, 4)):
        p = Iri(base + f"rel{i}")
        info = PropertyInfo(iri=p, label=f"rel {i}", kind="object")
        for c in rng.sample(classes, rng.randint(1, 2)):
            info.domains.add(c)
        for c in rng.sample(classes, rng.randint(1, 2)):
            info.ranges.add(c)
        schema.properties[p] = info
        object_props.append(info)

    data_props = []
    for i in range(rng.randint(1, 2)):
        p = Iri(base + f"val{i}")
        datatype = rng.choice(["integer", "decimal", "string"])
        info = PropertyInfo(iri=p, label=f"val {i}", kind="data", datatype=datatype)
        for c in rng.sample(classes, rng.randint(1, 2)):
            info.domains.add(c)
        schema.properties[p] = info
        data_props.append(info)

    closure = subclass_closure(schema)

    instances = [Iri(base + f"i{i}") for i in range(rng.randint(4, 20))]
    triples = []
    for inst in instances:
        for c in rng.sample(classes, rng.randint(1, 2)):
            triples.append(Triple(inst, RDF_TYPE, c))
    while len(triples) < rng.randint(len(triples), max_triples):
        kind = rng.random()
        s = rng.choice(instances)
        if kind < 0.55 and object_props:
            p = rng.choice(object_props)
            triples.append(Triple(s, p.iri, rng.choice(instances)))
        elif data_props:
            p = rng.choice(data_props)
            datatype = p.datatype if rng.random() < 0.8 else rng.choice(
                ["integer", "decimal", "string"]
            )
            if datatype == "integer":
                lit = Literal(str(rng.randint(-5, 20)), "integer")
            elif datatype == "decimal":
                lit = Literal(f"{rng.randint(-3, 8)}.{rng.randrange(10)}", "decimal")
            else:
                lit = Literal(rng.choice(["alpha", "beta", "gamma", ""]), "string")
            triples.append(Triple(s, p.iri, lit))
        else:
            break
    rng.shuffle(triples)

    n_datasets = rng.randint(1, 3)
    buckets = [[] for _ in range(n_datasets)]
    for t in triples:
        buckets[rng.randrange(n_datasets)].append(t)
    store = DatasetStore()
    store.load({f"d{i}": Graph(f"d{i}", bucket) for i, bucket in enumerate(buckets)})
    return schema, closure, store


def random_query(rng: random.Random, schema, closure, store, max_nodes: int = 5):
    """A random well-formed query over ``schema``, built through the
    builder itself so every step is schema-checked."""

    def lookup(cls):
        graphs = store.graphs_for("all")
        return instances_of_extended(closure, cls, graphs).all_instances()

    root = rng.choice(sorted(schema.classes, key=lambda c: c.value))
    builder = QueryBuilder(schema, closure, root, instance_lookup=lookup)

    for _ in range(rng.randint(0, max_nodes - 1)):
        q = builder.query
        parent = rng.choice([n for n in q.nodes if not isinstance(n, LiteralNode)])
        applicable = properties_of(schema, closure, parent.class_iri)
        try:
            if rng.random() < 0.3:
                data = [p for p in applicable if p.kind == "data"]
                if not data:
                    continue
                builder.add_literal_step(parent.node_id, rng.choice(data).iri)
                node_id = len(builder.query.nodes) - 1
                node = builder.query.node(node_id)
                if rng.random() < 0.6:
                    comparator = rng.choice(
                        ORDER_COMPARATORS if node.datatype in ("integer", "decimal") else ("=", "!=")
                    )
                    if node.datatype == "string":
                        constant = Literal(rng.choice(["alpha", "beta", "zeta"]), "string")
                    elif rng.random() < 0.5:
                        constant = Literal(str(rng.randint(-2, 10)), "integer")
                    else:
                        constant = Literal(f"{rng.randint(0, 5)}.5", "decimal")
                    builder.add_filter(node_id, comparator, constant)
            elif rng.random() < 0.25:
                # Walk an edge backwards: the property must apply to the
                # child, the parent plays the statement-object role.
                candidates = []
                for info in schema.properties.values():
                    if info.kind != "object":
                        continue
                    targets = info.ranges | {
                        filler
                        for c in schema.classes.values()
                        for p, filler in c.restriction_props
                        if p == info.iri
                    }
                    if any(
                        t in closure.reachable[parent.class_iri]
                        or parent.class_iri in closure.reachable[t]
                        for t in targets
                    ):
                        for d in info.domains:
                            candidates.append((info.iri, d))
                if not candidates:
                    continue
                prop, target = rng.choice(sorted(candidates, key=lambda c: (c[0].value, c[1].value)))
                builder.add_object_step(parent.node_id, prop, target, direction="inverse")
            else:
                objects = [p for p in applicable if p.kind == "object"]
                if not objects:
                    continue
                prop = rng.choice(objects)
                fillers = {
                    filler
                    for c in schema.classes.values()
                    for p, filler in c.restriction_props
                    if p == prop.iri
                }
                targets = sorted(prop.ranges | fillers, key=lambda c: c.value)
                if not targets:
                    continue
                declared = rng.choice(targets)
                pool = sorted(
                    closure.descendants_of(declared) | closure.reachable[declared],
                    key=lambda c: c.value,
                )
                builder.add_object_step(parent.node_id, prop.iri, rng.choice(pool))
        except OntoQueryError:
            continue

    # Sprinkle a selection on one class node.
    if rng.random() < 0.3:
        q = builder.query
        node = rng.choice([n for n in q.nodes if not isinstance(n, LiteralNode)])
        pool = sorted(lookup(node.class_iri), key=lambda i: i.value)
        if pool:
            chosen = rng.sample(pool, rng.randint(1, min(3, len(pool))))
            builder.set_selection(node.node_id, rng.choice(["any-of", "none-of"]), chosen)
    return builder.query
