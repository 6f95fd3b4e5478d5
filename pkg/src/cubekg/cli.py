"""Command-line driver: etl, validate, query, stats, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .etl import PipelineConfig, PipelineError, run_pipeline
from .olap import QueryError, compile_query, drill_across, emit_sparql, execute_query, query_from_json
from .quality import cuboid_stats, level_stats, stats_report
from .rdf import parse_turtle
from .schema import load_tbox, local_name, validate_tbox
from .service import ServiceConfig, serve


def _load_graph_and_schema(dump_path: str):
    text = Path(dump_path).read_text(encoding="utf-8")
    graph = parse_turtle(text)
    return graph, load_tbox(graph)


def cmd_etl(args) -> int:
    try:
        config = PipelineConfig.from_file(args.config)
        _, report = run_pipeline(config)
    except PipelineError as exc:
        print(exc.phase, file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(report.to_json(), indent=2))
    return 0


def cmd_validate(args) -> int:
    graph = parse_turtle(Path(args.tbox).read_text(encoding="utf-8"))
    schema = load_tbox(graph)
    violations = validate_tbox(schema)
    if violations:
        for v in violations:
            print(v)
        return 1
    print("ok: schema is valid "
          f"({len(schema.dimensions)} dimensions, {len(schema.levels)} levels, "
          f"{len(schema.measures)} measures)")
    return 0


def _load_query_doc(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    # accept both a bare query and a catalog entry wrapping one
    if isinstance(doc, dict) and "query" in doc and "dataset" not in doc \
            and "drillAcross" not in doc:
        return doc["query"]
    return doc


def cmd_query(args) -> int:
    graph, schema = _load_graph_and_schema(args.dump)
    try:
        doc = _load_query_doc(args.query)
    except json.JSONDecodeError as exc:
        print(f"error: query file is not valid JSON: {exc}", file=sys.stderr)
        return 1
    try:
        if "drillAcross" in doc:
            if args.emit_sparql:
                raise QueryError("drill-across queries execute natively; SPARQL "
                                 "emission covers single-cuboid queries")
            spec = doc["drillAcross"]
            table = drill_across(
                query_from_json(spec.get("left") or {}),
                query_from_json(spec.get("right") or {}),
                list(spec.get("sharedLevels") or []),
                schema, graph,
            )
        else:
            q = query_from_json(doc)
            if args.emit_sparql:
                print(emit_sparql(compile_query(q, schema)), end="")
                return 0
            table = execute_query(q, schema, graph)
    except QueryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(table.to_csv(), end="")
    return 0


def _aligned(rows: list[list[str]]) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        lines.append("  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def cmd_stats(args) -> int:
    graph, schema = _load_graph_and_schema(args.dump)
    if args.json:
        print(json.dumps(stats_report(graph, schema), indent=2))
        return 0
    level_rows = [["level", "attributes", "members", "links", "triples"]]
    for s in level_stats(graph, schema):
        level_rows.append([local_name(s.level), s.attribute_count, s.member_count,
                           s.external_link_count, s.triple_count])
    cuboid_rows = [["cuboid", "observations", "triples"]]
    for c in cuboid_stats(graph, schema):
        cuboid_rows.append([local_name(c.cuboid), c.observation_count, c.triple_count])
    print(_aligned(level_rows))
    print()
    print(_aligned(cuboid_rows))
    return 0


def cmd_serve(args) -> int:
    try:
        config = ServiceConfig.from_file(args.config)
        serve(config)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubekg",
        description="tabular open data -> QB4OLAP knowledge graph -> OLAP queries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("etl", help="run the full pipeline from a config file")
    p.add_argument("config")
    p.set_defaults(fn=cmd_etl)

    p = sub.add_parser("validate", help="validate a TBox Turtle file")
    p.add_argument("tbox")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("query", help="run a structured query against a dump")
    p.add_argument("dump")
    p.add_argument("query")
    p.add_argument("--emit-sparql", action="store_true",
                   help="print the SPARQL text instead of executing")
    p.set_defaults(fn=cmd_query)

    p = sub.add_parser("stats", help="level and cuboid statistics for a dump")
    p.add_argument("dump")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_stats)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("config")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
