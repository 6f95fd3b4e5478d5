"""HTTP service exposing the schema, the example catalog, structured OLAP
querying, SPARQL emission, statistics, and the Turtle dump.

The graph is loaded once at startup and held as an immutable snapshot; every
request reads that snapshot, so concurrent requests are independent.  The
public query surface is the structured query JSON; raw SPARQL is an
emission target only, never executed here.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response

from .etl import EtlError
from .mapping import MappingError
from .olap import (
    QueryError,
    compile_query,
    drill_across,
    emit_federated_sparql,
    emit_sparql,
    execute_query,
    query_from_json,
)
from .quality import stats_report
from .rdf import Graph, parse_turtle
from .schema import CubeSchema, SchemaError, load_tbox, schema_to_json, validate_tbox


class ServiceError(RuntimeError):
    pass


@dataclass
class ServiceConfig:
    dump_path: Path
    host: str = "127.0.0.1"
    port: int = 8765
    endpoints: dict[str, str] = field(default_factory=dict)
    cors_origins: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not (0 < self.port < 65536):
            raise ServiceError(f"invalid port {self.port}")

    @classmethod
    def from_file(cls, path: str | Path) -> "ServiceConfig":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        dump = Path(doc["dump"])
        if not dump.is_absolute():
            dump = path.parent / dump
        config = cls(
            dump_path=dump,
            host=doc.get("host", "127.0.0.1"),
            port=int(doc.get("port", 8765)),
            endpoints=dict(doc.get("endpoints", {})),
            cors_origins=list(doc.get("corsOrigins", [])),
        )
        return config.with_env_overrides()

    def with_env_overrides(self) -> "ServiceConfig":
        host = os.environ.get("CUBEKG_HOST", self.host)
        port = int(os.environ.get("CUBEKG_PORT", self.port))
        dump = Path(os.environ.get("CUBEKG_DUMP", self.dump_path))
        return ServiceConfig(dump, host, port, self.endpoints, self.cors_origins)


def load_examples() -> list[dict]:
    """The bundled catalog of example queries, sorted by name."""
    out = []
    for entry in resources.files("cubekg").joinpath("queries").iterdir():
        if entry.name.endswith(".json"):
            out.append(json.loads(entry.read_text(encoding="utf-8")))
    out.sort(key=lambda doc: doc.get("name", ""))
    return out


@dataclass
class AppState:
    graph: Graph
    schema: CubeSchema
    dump_bytes: bytes
    endpoints: dict[str, str]
    examples: list[dict]


def load_state(config: ServiceConfig) -> AppState:
    try:
        dump_bytes = config.dump_path.read_bytes()
    except OSError as exc:
        raise ServiceError(f"cannot read dump {config.dump_path}: {exc}") from exc
    graph = parse_turtle(dump_bytes.decode("utf-8"))
    schema = load_tbox(graph)
    violations = validate_tbox(schema)
    if violations:
        raise ServiceError("dump carries an invalid TBox:\n" + "\n".join(violations))
    return AppState(graph, schema, dump_bytes, dict(config.endpoints), load_examples())


def _error(status: int, code: str, message: str, detail=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _run_query_doc(state: AppState, doc: dict):
    """Dispatch a /query body: either one structured query or a drill-across."""
    if "drillAcross" in doc:
        spec = doc["drillAcross"]
        if not isinstance(spec, dict):
            raise QueryError("drillAcross must be an object")
        left = query_from_json(spec.get("left") or {})
        right = query_from_json(spec.get("right") or {})
        shared = spec.get("sharedLevels") or []
        return drill_across(left, right, list(shared), state.schema, state.graph)
    q = query_from_json(doc)
    return execute_query(q, state.schema, state.graph)


def create_app(config: ServiceConfig) -> FastAPI:
    state = load_state(config)
    app = FastAPI(title="cubekg", version="0.1.0")
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(QueryError)
    async def query_error(request: Request, exc: QueryError):
        return _error(422, "invalid-query", str(exc))

    @app.exception_handler(SchemaError)
    async def schema_error(request: Request, exc: SchemaError):
        return _error(422, "schema-error", str(exc))

    @app.exception_handler(MappingError)
    async def mapping_error(request: Request, exc: MappingError):
        return _error(422, "mapping-error", str(exc))

    @app.exception_handler(EtlError)
    async def etl_error(request: Request, exc: EtlError):
        return _error(422, "etl-error", str(exc))

    @app.exception_handler(RequestValidationError)
    async def body_error(request: Request, exc: RequestValidationError):
        return _error(422, "malformed-body", "request body is not valid JSON",
                      detail=exc.errors())

    @app.exception_handler(json.JSONDecodeError)
    async def json_error(request: Request, exc: json.JSONDecodeError):
        return _error(422, "malformed-body", f"request body is not valid JSON: {exc}")

    @app.get("/health")
    async def health():
        return {"status": "ok", "triples": len(state.graph)}

    @app.get("/schema")
    async def schema():
        return schema_to_json(state.schema)

    @app.get("/examples")
    async def examples():
        return state.examples

    @app.post("/query")
    async def query(request: Request):
        doc = json.loads(await request.body())
        table = _run_query_doc(state, doc)
        return table.to_json()

    @app.post("/query/sparql")
    async def query_sparql(request: Request):
        doc = json.loads(await request.body())
        if "drillAcross" in doc:
            raise QueryError("drill-across queries execute natively; SPARQL emission "
                             "covers single-cuboid queries")
        plan = compile_query(query_from_json(doc), state.schema)
        return PlainTextResponse(emit_sparql(plan))

    @app.post("/query/federated")
    async def query_federated(request: Request):
        doc = json.loads(await request.body())
        query_doc = doc.get("query")
        if query_doc is None:
            raise QueryError("federated emission needs a 'query' member")
        endpoint = doc.get("endpoint", "")
        endpoint_iri = state.endpoints.get(endpoint, endpoint)
        if not endpoint_iri:
            raise QueryError("federated emission needs an endpoint name or IRI")
        join_level = doc.get("joinLevel", "")
        pattern = doc.get("externalPattern", "")
        plan = compile_query(query_from_json(query_doc), state.schema)
        text = emit_federated_sparql(plan, endpoint_iri, join_level, pattern,
                                     graph=state.graph)
        return PlainTextResponse(text)

    @app.get("/stats")
    async def stats():
        return stats_report(state.graph, state.schema)

    @app.get("/dump.ttl")
    async def dump():
        return Response(content=state.dump_bytes, media_type="text/turtle")

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted; startup failures exit the process."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
