"""HTTP service over an immutable knowledge-base snapshot.

Endpoints:
    POST /api/query {question, minHits?, forcedLevel?} -> structured record
    GET  /api/pages                                    -> page name list
    GET  /api/pages/{name}?q={question}                -> page view with spans
    GET  /                                             -> static UI assets
"""

from __future__ import annotations

import json
import logging
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlparse

from .engine import CascadeConfig, Level, answer
from .kb import KnowledgeBase
from .lexicon import Lexicon, default_lexicon
from .logform import EmptyGoal
from .parser import AssociationModel
from .presenter import UnknownPage, render_page, result_record

log = logging.getLogger("manswer.server")

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
}

_FALLBACK_INDEX = b"""<!doctype html>
<html><head><meta charset="utf-8"><title>manswer</title></head>
<body><h1>manswer</h1>
<p>No UI bundle is installed. The API is live: POST /api/query,
GET /api/pages, GET /api/pages/{name}?q=...</p></body></html>
"""


class _Handler(BaseHTTPRequestHandler):
    server_version = "manswer/0.1"
    kb: KnowledgeBase
    config: CascadeConfig
    lexicon: Lexicon
    model: AssociationModel | None
    static_dir: Path | None

    def log_message(self, fmt: str, *args) -> None:
        log.debug("%s " + fmt, self.address_string(), *args)

    # --- helpers

    def _send_json(self, payload: dict | list, status: int = 200) -> None:
        body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json({"error": message}, status)

    def _answer(self, question: str, min_hits: int | None, forced: str | None,
                max_level: str | None) -> dict:
        config = CascadeConfig(
            min_hits=min_hits if min_hits is not None else self.config.min_hits,
            max_level=Level.parse(max_level) if max_level else self.config.max_level,
            forced_level=Level.parse(forced) if forced else self.config.forced_level,
        )
        results = answer(question, self.kb, config, self.lexicon, self.model)
        executed = max((r.level for r in results),
                       default=config.forced_level or Level.L0_synonyms)
        return result_record(question, results, self.kb, executed)

    # --- verbs

    def do_POST(self) -> None:  # noqa: N802 (stdlib naming)
        parsed = urlparse(self.path)
        if parsed.path != "/api/query":
            self._send_error_json(404, "not found")
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length) or b"{}")
        except (ValueError, json.JSONDecodeError):
            self._send_error_json(400, "invalid JSON body")
            return
        question = (payload.get("question") or "").strip()
        if not question:
            self._send_error_json(400, "empty question")
            return
        try:
            record = self._answer(question, payload.get("minHits"),
                                  payload.get("forcedLevel"), payload.get("maxLevel"))
        except EmptyGoal:
            self._send_error_json(400, "question contains no content words")
            return
        except ValueError as exc:
            self._send_error_json(400, str(exc))
            return
        self._send_json(record)

    def do_GET(self) -> None:  # noqa: N802
        parsed = urlparse(self.path)
        path = parsed.path
        if path == "/api/pages":
            self._send_json(sorted(self.kb.pages))
            return
        if path.startswith("/api/pages/"):
            name = unquote(path[len("/api/pages/"):])
            query = parse_qs(parsed.query)
            question = (query.get("q", [""])[0]).strip()
            try:
                results = []
                if question:
                    results = answer(question, self.kb, self.config,
                                     self.lexicon, self.model)
                view = render_page(name, results, self.kb)
            except UnknownPage:
                self._send_error_json(404, f"unknown page {name!r}")
                return
            except EmptyGoal:
                view = render_page(name, [], self.kb)
            self._send_json(view)
            return
        self._serve_static(path)

    def _serve_static(self, path: str) -> None:
        if path == "/":
            path = "/index.html"
        if self.static_dir is not None:
            candidate = (self.static_dir / path.lstrip("/")).resolve()
            if candidate.is_file() and str(candidate).startswith(str(self.static_dir.resolve())):
                body = candidate.read_bytes()
                self.send_response(HTTPStatus.OK)
                self.send_header("Content-Type",
                                 _CONTENT_TYPES.get(candidate.suffix, "application/octet-stream"))
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)
                return
        if path == "/index.html":
            self.send_response(HTTPStatus.OK)
            self.send_header("Content-Type", "text/html; charset=utf-8")
            self.send_header("Content-Length", str(len(_FALLBACK_INDEX)))
            self.end_headers()
            self.wfile.write(_FALLBACK_INDEX)
            return
        self._send_error_json(404, "not found")


def make_server(kb: KnowledgeBase, port: int = 8080,
                config: CascadeConfig | None = None,
                lexicon: Lexicon | None = None,
                model: AssociationModel | None = None,
                static_dir: Path | None = None,
                host: str = "127.0.0.1") -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {
        "kb": kb,
        "config": config or CascadeConfig(),
        "lexicon": lexicon or default_lexicon(),
        "model": model,
        "static_dir": static_dir,
    })
    return ThreadingHTTPServer((host, port), handler)
