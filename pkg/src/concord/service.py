"""HTTP/JSON service exposing query, frequency, keyword, and subcorpus APIs.

Single-user, read-mostly: the service never mutates index files; only
subcorpus descriptors are created or deleted. Query evaluation runs under
a concurrency cap (503 above it) and a cooperative per-query timeout
(408). Errors are JSON objects ``{code, message, position?}`` where
``position`` pinpoints query syntax problems.
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from . import analytics
from .index import CorpusNotFound, CorpusReader, Registry, UnknownAttribute
from .query import (
    QueryError,
    QuerySettings,
    QueryTimeout,
    UnknownStructuralAttribute,
    evaluate,
    kwic,
    parse_query,
)

__all__ = ["ServiceConfig", "create_app"]


@dataclass(frozen=True)
class ServiceConfig:
    registry_dir: Path
    host: str = "127.0.0.1"
    port: int = 8787
    max_concurrent_queries: int = 4
    query_timeout: float = 30.0

    def __post_init__(self) -> None:
        if self.max_concurrent_queries < 1:
            raise ValueError("max_concurrent_queries must be positive")
        if self.query_timeout <= 0:
            raise ValueError("query_timeout must be positive")


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, position: int | None = None):
        self.status = status
        self.code = code
        self.message = message
        self.position = position
        super().__init__(message)


class QueryRequest(BaseModel):
    q: str
    context: int | None = None
    page_size: int = 50
    cursor: str | None = None
    max_hits: int | None = None
    subcorpus: str | None = None


class KeywordsRequest(BaseModel):
    target_subcorpus: str | None = None
    reference_subcorpus: str | None = None
    attr: str = "word"
    min_count: int = 3


class SubcorpusRequest(BaseModel):
    name: str
    where: dict[str, str] | None = None
    text_ids: list[str] | None = None


class DistributionRequest(BaseModel):
    q: str
    key: str
    subcorpus: str | None = None


def _query_fingerprint(name: str, q: str, max_hits: int | None, subcorpus: str | None) -> str:
    payload = json.dumps([name, q, max_hits, subcorpus])
    return hashlib.blake2b(payload.encode(), digest_size=6).hexdigest()


def _encode_cursor(fingerprint: str, offset: int) -> str:
    raw = json.dumps({"f": fingerprint, "o": offset}).encode()
    return base64.urlsafe_b64encode(raw).decode()


def _decode_cursor(cursor: str, fingerprint: str) -> int:
    try:
        data = json.loads(base64.urlsafe_b64decode(cursor.encode()))
        if data["f"] != fingerprint:
            raise ApiError(400, "bad_cursor", "cursor does not belong to this query")
        offset = int(data["o"])
        if offset < 0:
            raise ValueError(offset)
        return offset
    except ApiError:
        raise
    except (ValueError, KeyError, binascii.Error, json.JSONDecodeError):
        raise ApiError(400, "bad_cursor", "malformed pagination cursor") from None


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="concord", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = Registry(config.registry_dir)
    readers: dict[str, CorpusReader] = {}
    readers_lock = threading.Lock()
    query_slots = threading.BoundedSemaphore(config.max_concurrent_queries)

    def reader_for(name: str) -> CorpusReader:
        with readers_lock:
            reader = readers.get(name)
            if reader is None:
                try:
                    reader = CorpusReader.open(name, config.registry_dir)
                except CorpusNotFound as exc:
                    raise ApiError(404, "corpus_not_found", str(exc)) from exc
                readers[name] = reader
            return reader

    def subcorpus_or_none(reader: CorpusReader, name: str | None) -> analytics.Subcorpus | None:
        if name is None or name == "":
            return None
        try:
            return analytics.load_subcorpus(reader, name)
        except KeyError as exc:
            raise ApiError(404, "subcorpus_not_found", str(exc)) from exc

    def parse_or_400(q: str, settings: QuerySettings):
        try:
            return parse_query(q, settings)
        except QueryError as exc:
            raise ApiError(400, "bad_query", str(exc), position=exc.position) from exc

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        body: dict = {"code": exc.code, "message": exc.message}
        if exc.position is not None:
            body["position"] = exc.position
        return JSONResponse(status_code=exc.status, content=body)

    @app.get("/corpora")
    def list_corpora() -> list[dict]:
        out = []
        for name in registry.names():
            descriptor = registry.load(name)
            out.append(
                {
                    "name": descriptor.name,
                    "tokens": descriptor.tokens,
                    "positional_attrs": list(descriptor.positional_attrs),
                    "structural_attrs": list(descriptor.structural_attrs),
                }
            )
        return out

    @app.post("/corpora/{name}/query")
    def run_query(name: str, request: QueryRequest) -> dict:
        reader = reader_for(name)
        settings = QuerySettings(
            context_size=request.context if request.context is not None else 8,
            max_hits=request.max_hits if request.max_hits is not None else 10000,
        )
        query = parse_or_400(request.q, settings)
        scope = subcorpus_or_none(reader, request.subcorpus)
        fingerprint = _query_fingerprint(name, request.q, settings.max_hits, request.subcorpus)
        offset = _decode_cursor(request.cursor, fingerprint) if request.cursor else 0
        page_size = max(1, min(request.page_size, 1000))

        if not query_slots.acquire(blocking=False):
            raise ApiError(503, "busy", "query concurrency limit reached; retry later")
        try:
            deadline = time.monotonic() + config.query_timeout
            try:
                result = evaluate(query, reader, scope=scope, settings=settings,
                                  deadline=deadline)
            except QueryTimeout as exc:
                raise ApiError(408, "timeout", str(exc)) from exc
            except UnknownStructuralAttribute as exc:
                raise ApiError(400, "unknown_structural_attribute", str(exc)) from exc
            page = result.matches[offset:offset + page_size]
            lines = kwic(page, reader, settings)
        finally:
            query_slots.release()

        next_cursor = None
        if offset + page_size < len(result.matches):
            next_cursor = _encode_cursor(fingerprint, offset + page_size)
        return {
            "matches_total": len(result.matches),
            "truncated": result.truncated,
            "offset": offset,
            "lines": [
                {
                    "text_id": line.text_id,
                    "left": list(line.left),
                    "focus": list(line.focus),
                    "right": list(line.right),
                }
                for line in lines
            ],
            "next_cursor": next_cursor,
        }

    @app.get("/corpora/{name}/frequency")
    def frequency(name: str, attr: str = "word", top: int | None = None,
                  subcorpus: str | None = None) -> dict:
        reader = reader_for(name)
        scope = subcorpus_or_none(reader, subcorpus)
        try:
            freq = analytics.frequency_list(reader, attr, scope=scope, top_k=top)
        except UnknownAttribute as exc:
            raise ApiError(400, "unknown_attribute", str(exc)) from exc
        return {
            "attribute": freq.attribute,
            "scope_size": freq.scope_size,
            "rows": [[value, count] for value, count in freq.rows],
        }

    @app.post("/corpora/{name}/keywords")
    def keyword_rows(name: str, request: KeywordsRequest) -> dict:
        reader = reader_for(name)
        target = subcorpus_or_none(reader, request.target_subcorpus)
        reference = subcorpus_or_none(reader, request.reference_subcorpus)
        try:
            rows = analytics.keywords(
                reader, request.attr, target=target, reference=reference,
                min_count=request.min_count,
            )
        except UnknownAttribute as exc:
            raise ApiError(400, "unknown_attribute", str(exc)) from exc
        except analytics.EmptyScope as exc:
            raise ApiError(400, "empty_scope", str(exc)) from exc
        return {
            "rows": [
                {
                    "value": r.value,
                    "target_count": r.target_count,
                    "reference_count": r.reference_count,
                    "target_size": r.target_size,
                    "reference_size": r.reference_size,
                    "g2": r.g2,
                    "direction": r.direction,
                }
                for r in rows
            ]
        }

    @app.post("/corpora/{name}/distribution")
    def match_distribution(name: str, request: DistributionRequest) -> dict:
        reader = reader_for(name)
        settings = QuerySettings(max_hits=None)
        query = parse_or_400(request.q, settings)
        scope = subcorpus_or_none(reader, request.subcorpus)
        if not query_slots.acquire(blocking=False):
            raise ApiError(503, "busy", "query concurrency limit reached; retry later")
        try:
            deadline = time.monotonic() + config.query_timeout
            try:
                result = evaluate(query, reader, scope=scope, settings=settings,
                                  deadline=deadline)
            except QueryTimeout as exc:
                raise ApiError(408, "timeout", str(exc)) from exc
            except UnknownStructuralAttribute as exc:
                raise ApiError(400, "unknown_structural_attribute", str(exc)) from exc
            categories = analytics.distribution(result.matches, reader, request.key)
        finally:
            query_slots.release()
        return {"categories": categories, "total": len(result.matches)}

    @app.get("/corpora/{name}/subcorpora")
    def list_subcorpora(name: str) -> list[dict]:
        reader = reader_for(name)
        return [
            {"name": sub.name, "size": sub.size, "predicate": sub.predicate}
            for sub in analytics.list_subcorpora(reader)
        ]

    @app.post("/corpora/{name}/subcorpora", status_code=201)
    def create_subcorpus(name: str, request: SubcorpusRequest) -> dict:
        reader = reader_for(name)
        try:
            sub = analytics.define_subcorpus(
                reader, request.name, where=request.where, text_ids=request.text_ids
            )
        except analytics.DuplicateName as exc:
            raise ApiError(409, "duplicate_name", str(exc)) from exc
        except analytics.UnknownMetadataKey as exc:
            raise ApiError(400, "unknown_metadata_key", str(exc)) from exc
        except ValueError as exc:
            raise ApiError(400, "bad_request", str(exc)) from exc
        return {"name": sub.name, "size": sub.size, "predicate": sub.predicate}

    @app.delete("/corpora/{name}/subcorpora/{sub_name}", status_code=204)
    def remove_subcorpus(name: str, sub_name: str) -> Response:
        reader = reader_for(name)
        try:
            analytics.delete_subcorpus(reader, sub_name)
        except KeyError as exc:
            raise ApiError(404, "subcorpus_not_found", str(exc)) from exc
        return Response(status_code=204)

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
