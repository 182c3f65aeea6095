"""Command-line entry points: serve the HTTP API, run queries from
text, suggest concepts, validate a deployment, and list schema paths.

Exit codes: 0 success, 1 validation or domain error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .compiler import parse_query_text
from .config import load_deployment
from .engine import ALL_DATASETS, cached_execute, display_value, partition_results
from .errors import OntoQueryError
from .rdf import Iri
from .runtime import Runtime
from .suggest import discover_paths, suggest_concepts

log = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontoquery",
        description="Ontology-guided query formulation and answering over RDF datasets.",
    )
    parser.add_argument(
        "-c",
        "--config",
        default="ontoquery.toml",
        help="deployment configuration file (default: %(default)s)",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default=None, help="bind host (overrides config)")
    serve.add_argument("--port", type=int, default=None, help="bind port (overrides config)")

    query = sub.add_parser("query", help="run a query from its text form")
    query.add_argument("file", nargs="?", default="-", help="query text file, or - for stdin")
    query.add_argument("--dataset", default=ALL_DATASETS, help="dataset id or 'all'")
    query.add_argument(
        "--partition",
        action="store_true",
        help="print specific and general results as separate sections",
    )

    suggest = sub.add_parser("suggest", help="autocomplete concepts by label prefix")
    suggest.add_argument("prefix")
    suggest.add_argument("--limit", type=int, default=None)

    sub.add_parser("validate", help="load all configured files and print diagnostics")

    paths = sub.add_parser("paths", help="list schema paths between two concepts")
    paths.add_argument("start", metavar="from", help="source concept IRI")
    paths.add_argument("goal", metavar="to", help="target concept IRI")
    paths.add_argument("--max", type=int, default=None, help="maximum path length")

    return parser


def _load_runtime(config: str) -> Runtime:
    return Runtime.load(load_deployment(config))


def _print_table(table, graphs, out) -> None:
    print("\t".join(label for _, label in table.columns) + "\tdataset", file=out)
    for row, provenance in zip(table.rows, table.provenance):
        cells = [display_value(term, graphs) for term in row]
        print("\t".join(cells) + f"\t{provenance}", file=out)


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    runtime = _load_runtime(args.config)
    app = create_app(runtime)
    host = args.host or runtime.deployment.listen_host
    port = args.port if args.port is not None else runtime.deployment.listen_port
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def _cmd_query(args, out) -> int:
    runtime = _load_runtime(args.config)
    if args.file == "-":
        text = sys.stdin.read()
    else:
        text = Path(args.file).read_text()
    q = parse_query_text(text, runtime.schema, runtime.closure)
    table, _ = cached_execute(
        q, runtime.schema, runtime.closure, runtime.store, args.dataset, runtime.cache
    )
    graphs = runtime.store.graphs_for(args.dataset)
    if not args.partition:
        _print_table(table, graphs, out)
        return 0
    partitioned = partition_results(table, q, runtime.closure, runtime.store, args.dataset)
    print(f"# specific ({len(partitioned.specific.rows)} rows)", file=out)
    _print_table(partitioned.specific, graphs, out)
    print(f"# general ({len(partitioned.general.rows)} rows)", file=out)
    _print_table(partitioned.general, graphs, out)
    return 0


def _cmd_suggest(args, out) -> int:
    runtime = _load_runtime(args.config)
    limit = args.limit if args.limit is not None else runtime.deployment.suggestion_limit
    found = suggest_concepts(runtime.schema, runtime.closure, args.prefix, limit=limit)
    for s in found:
        print(f"{s.label}\t{s.class_iri.value}\t{s.match_kind}", file=out)
    return 0


def _cmd_validate(args, out) -> int:
    runtime = _load_runtime(args.config)
    schema = runtime.schema
    print(f"schema: {runtime.deployment.schema_path}", file=out)
    print(f"  classes: {len(schema.classes)}", file=out)
    print(f"  properties: {len(schema.properties)}", file=out)
    print(f"  subclass cycles: {len(runtime.closure.cycles)}", file=out)
    for group in runtime.closure.cycles:
        members = ", ".join(sorted(c.value for c in group))
        print(f"    cycle: {members}", file=out)
    for descriptor in runtime.dataset_descriptors():
        if descriptor.dataset_id == ALL_DATASETS:
            continue
        print(
            f"dataset {descriptor.dataset_id}: {descriptor.triple_count} triples"
            f" ({descriptor.label})",
            file=out,
        )
    return 0


def _cmd_paths(args, out) -> int:
    runtime = _load_runtime(args.config)
    limit = args.max if args.max is not None else runtime.deployment.path_max_length
    found = discover_paths(
        runtime.schema, runtime.closure, Iri(args.start), Iri(args.goal), max_length=limit
    )
    schema = runtime.schema

    def label(iri: Iri, from_classes: bool) -> str:
        if from_classes:
            info = schema.class_info(iri)
            return info.label if info else iri.local_name
        info = schema.property_info(iri)
        return info.label if info else iri.local_name

    for path in found:
        parts = []
        for step in path.steps:
            arrow = "->" if step.direction == "forward" else "<-"
            parts.append(
                f"{label(step.subject, True)} -[{label(step.property, False)}]{arrow} "
                f"{label(step.object, True)}"
            )
        print(" | ".join(parts) if parts else "(same concept)", file=out)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    out = sys.stdout
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "query":
            return _cmd_query(args, out)
        if args.command == "suggest":
            return _cmd_suggest(args, out)
        if args.command == "validate":
            return _cmd_validate(args, out)
        if args.command == "paths":
            return _cmd_paths(args, out)
        raise AssertionError(f"unhandled command {args.command}")
    except OntoQueryError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
