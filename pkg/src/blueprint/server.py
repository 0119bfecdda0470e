"""Workspace development server: watch, serve, mutate, push.

Watches a directory of ``*.blueprint.json`` files, serves them over
HTTP, applies mutation batches with an optimistic revision check, and
pushes change events to subscribers over server-sent events so canvas
and CLI edits converge quickly (target: well under 200 ms end to end).

Disk is the source of truth: the CLI and hand editors write the same
files directly, and the watcher folds their changes back in. Server
memory is only a cache of the last good parse per document; a file that
currently fails to parse keeps serving its last good revision while the
error is surfaced on reads and as an event.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from contextlib import asynccontextmanager, suppress
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, AsyncIterator, Sequence

import uvicorn
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response, StreamingResponse
from fastapi.staticfiles import StaticFiles

from .cli import WORKSPACE_CONFIG, atomic_write
from .lint import diagnostics_to_json, lint_document
from .model import (
    BLUEPRINT_SUFFIX,
    BlueprintDocument,
    DocumentError,
    InvalidCommand,
    ParseError,
    apply_commands,
    command_from_json,
    document_to_json,
    parse_document,
    serialize_document,
)
from .vocabulary import ConfigError, resolve_vocabulary

log = logging.getLogger("blueprint.server")

DEFAULT_PORT = 8787
DEFAULT_DEBOUNCE_MS = 50
DEFAULT_POLL_MS = 25
HEARTBEAT_SECONDS = 15.0


def _sse(kind: str, payload: dict[str, Any]) -> str:
    return f"event: {kind}\ndata: {json.dumps(payload, ensure_ascii=False)}\n\n"


@dataclass
class DocState:
    """Cache entry for one on-disk document."""

    name: str
    document: BlueprintDocument | None = None
    parse_error: str | None = None
    canonical: str | None = None
    signature: tuple[int, int, int] | None = None

    @property
    def revision(self) -> int | None:
        return self.document.revision if self.document is not None else None


class Workspace:
    """All per-directory server state; touched only from the event loop."""

    def __init__(self, root: Path, debounce_ms: int = DEFAULT_DEBOUNCE_MS, poll_ms: int = DEFAULT_POLL_MS):
        self.root = root
        self.debounce_s = debounce_ms / 1000.0
        self.poll_s = poll_ms / 1000.0
        self.docs: dict[str, DocState] = {}
        self.subscribers: dict[str, set[asyncio.Queue[str]]] = {}
        self.locks: dict[str, asyncio.Lock] = {}
        self._pending: dict[str, float] = {}

    # -- paths and config ---------------------------------------------------

    def doc_path(self, name: str) -> Path:
        return self.root / f"{name}{BLUEPRINT_SUFFIX}"

    def workspace_vocabulary(self) -> dict | None:
        config = self.root / WORKSPACE_CONFIG
        if not config.is_file():
            return None
        try:
            raw = json.loads(config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            log.warning("ignoring unreadable workspace config %s: %s", config, exc)
            return None
        if not isinstance(raw, dict):
            log.warning("ignoring workspace config %s: not an object", config)
            return None
        return raw.get("vocabulary")

    def registry_for(self, doc: BlueprintDocument):
        try:
            return resolve_vocabulary(doc.vocabulary, self.workspace_vocabulary())
        except ConfigError as exc:
            log.warning("vocabulary override rejected, using built-in: %s", exc)
            return resolve_vocabulary()

    # -- events ---------------------------------------------------------------

    def lock_for(self, name: str) -> asyncio.Lock:
        return self.locks.setdefault(name, asyncio.Lock())

    def subscribe(self, name: str) -> asyncio.Queue[str]:
        queue: asyncio.Queue[str] = asyncio.Queue()
        self.subscribers.setdefault(name, set()).add(queue)
        return queue

    def unsubscribe(self, name: str, queue: asyncio.Queue[str]) -> None:
        self.subscribers.get(name, set()).discard(queue)

    def broadcast(self, name: str, kind: str, payload: dict[str, Any]) -> None:
        frame = _sse(kind, payload)
        for queue in self.subscribers.get(name, set()):
            queue.put_nowait(frame)

    def snapshot_frame(self, state: DocState) -> str:
        payload: dict[str, Any] = {
            "doc": state.name,
            "kind": "snapshot",
            "revision": state.revision,
            "document": document_to_json(state.document) if state.document else None,
        }
        if state.parse_error:
            payload["error"] = state.parse_error
        return _sse("snapshot", payload)

    # -- scanning and watching ---------------------------------------------

    def _signature(self, path: Path) -> tuple[int, int, int] | None:
        try:
            st = path.stat()
        except OSError:
            return None
        return (st.st_ino, st.st_mtime_ns, st.st_size)

    def _scan_files(self) -> dict[str, Path]:
        found: dict[str, Path] = {}
        for path in sorted(self.root.glob(f"*{BLUEPRINT_SUFFIX}")):
            name = path.name[: -len(BLUEPRINT_SUFFIX)]
            if name:
                found[name] = path
        return found

    def _reload(self, name: str, broadcast: bool) -> None:
        """Reparse one file from disk and fold the result into the cache."""
        path = self.doc_path(name)
        signature = self._signature(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            state = self.docs.setdefault(name, DocState(name=name))
            state.parse_error = f"unreadable: {exc}"
            state.signature = signature
            if broadcast:
                self.broadcast(
                    name,
                    "parse-error",
                    {"doc": name, "kind": "parse-error", "revision": state.revision, "error": state.parse_error},
                )
            return
        state = self.docs.setdefault(name, DocState(name=name))
        state.signature = signature
        if state.canonical is not None and text == state.canonical and state.parse_error is None:
            return  # our own write, already applied and broadcast
        try:
            doc = parse_document(text)
        except ParseError as exc:
            state.parse_error = str(exc)
            if broadcast:
                self.broadcast(
                    name,
                    "parse-error",
                    {"doc": name, "kind": "parse-error", "revision": state.revision, "error": state.parse_error},
                )
            return
        state.document = doc
        state.parse_error = None
        state.canonical = serialize_document(doc)
        if broadcast:
            self.broadcast(
                name,
                "changed",
                {"doc": name, "kind": "changed", "revision": doc.revision, "document": document_to_json(doc)},
            )

    def initial_scan(self) -> None:
        for name in self._scan_files():
            self._reload(name, broadcast=False)

    def _tick(self, now: float) -> None:
        found = self._scan_files()
        for name in list(self.docs):
            if name not in found:
                state = self.docs.pop(name)
                self._pending.pop(name, None)
                self.broadcast(name, "removed", {"doc": name, "kind": "removed", "revision": state.revision})
        for name, path in found.items():
            signature = self._signature(path)
            state = self.docs.get(name)
            if state is None or state.signature != signature:
                if state is None:
                    self.docs[name] = DocState(name=name, signature=signature)
                else:
                    state.signature = signature
                self._pending[name] = now
        for name, since in list(self._pending.items()):
            if now - since >= self.debounce_s:
                del self._pending[name]
                self._reload(name, broadcast=True)

    async def watch(self) -> None:
        """Poll the directory forever; failures back off and retry."""
        backoff = self.poll_s
        loop = asyncio.get_running_loop()
        while True:
            try:
                self._tick(loop.time())
                backoff = self.poll_s
            except Exception:
                log.exception("watcher pass failed; retrying")
                backoff = min(backoff * 2, 2.0)
            await asyncio.sleep(backoff)

    # -- mutations ----------------------------------------------------------

    def apply_and_persist(self, state: DocState, commands, registry) -> tuple[BlueprintDocument, list[str]]:
        """Apply commands to the last good document, bump the revision,
        and atomically persist; caller holds the per-document lock."""
        base = state.document
        assert base is not None
        new_doc, affected = apply_commands(base, commands, registry)
        persisted = replace(new_doc, revision=base.revision + 1)
        text = serialize_document(persisted)
        atomic_write(self.doc_path(state.name), text)
        state.document = persisted
        state.parse_error = None
        state.canonical = text
        state.signature = self._signature(self.doc_path(state.name))
        self.broadcast(
            state.name,
            "changed",
            {
                "doc": state.name,
                "kind": "changed",
                "revision": persisted.revision,
                "document": document_to_json(persisted),
            },
        )
        return persisted, affected


def create_app(workspace: Workspace, static_dir: Path | None = None) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI) -> AsyncIterator[None]:
        workspace.initial_scan()
        watcher = asyncio.create_task(workspace.watch())
        try:
            yield
        finally:
            watcher.cancel()
            with suppress(asyncio.CancelledError):
                await watcher

    app = FastAPI(title="blueprint sync server", lifespan=lifespan)

    def known_state(name: str) -> DocState | None:
        state = workspace.docs.get(name)
        if state is None or state.document is None:
            return None
        return state

    @app.get("/api/docs")
    async def list_documents() -> JSONResponse:
        entries = []
        for name in sorted(workspace.docs):
            state = workspace.docs[name]
            entry: dict[str, Any] = {"name": name, "revision": state.revision}
            if state.parse_error:
                entry["parse_error"] = state.parse_error
            entries.append(entry)
        return JSONResponse(entries)

    @app.get("/api/docs/{name}")
    async def get_document(name: str) -> Response:
        state = known_state(name)
        if state is None:
            return JSONResponse({"error": "unknown document"}, status_code=404)
        headers = {"X-Blueprint-Revision": str(state.revision)}
        if state.parse_error:
            headers["X-Blueprint-Parse-Error"] = state.parse_error.replace("\n", " ")
        return Response(content=state.canonical, media_type="application/json", headers=headers)

    @app.get("/api/docs/{name}/lint")
    async def lint_endpoint(name: str) -> JSONResponse:
        state = known_state(name)
        if state is None:
            return JSONResponse({"error": "unknown document"}, status_code=404)
        registry = workspace.registry_for(state.document)
        return JSONResponse(diagnostics_to_json(lint_document(state.document, registry)))

    @app.get("/api/docs/{name}/registry")
    async def registry_endpoint(name: str) -> JSONResponse:
        state = known_state(name)
        if state is None:
            return JSONResponse({"error": "unknown document"}, status_code=404)
        registry = workspace.registry_for(state.document)
        return JSONResponse(
            {
                "node_types": [
                    {
                        "name": spec.name,
                        "role": spec.role.value,
                        "ladder": list(spec.ladder),
                        "matured": sorted(spec.matured),
                        "provenance": registry.node_provenance.get(spec.name, "built-in"),
                    }
                    for _, spec in sorted(registry.node_types.items())
                ],
                "edge_types": [
                    {
                        "name": spec.name,
                        "sources": sorted(spec.sources),
                        "targets": sorted(spec.targets),
                        "symmetric": spec.symmetric,
                        "provenance": registry.edge_provenance.get(spec.name, "built-in"),
                    }
                    for _, spec in sorted(registry.edge_types.items())
                ],
            }
        )

    @app.post("/api/docs/{name}/mutations")
    async def apply_mutations(name: str, request: Request) -> JSONResponse:
        state = known_state(name)
        if state is None:
            return JSONResponse({"error": "unknown document"}, status_code=404)
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return JSONResponse({"error": "bad_request", "message": "body must be JSON"}, status_code=422)
        if not isinstance(body, dict):
            return JSONResponse({"error": "bad_request", "message": "body must be an object"}, status_code=422)
        base_revision = body.get("base_revision")
        raw_commands = body.get("commands")
        if not isinstance(base_revision, int) or isinstance(base_revision, bool):
            return JSONResponse(
                {"error": "bad_request", "message": "base_revision must be an integer"}, status_code=422
            )
        if not isinstance(raw_commands, list):
            return JSONResponse(
                {"error": "bad_request", "message": "commands must be a list"}, status_code=422
            )

        async with workspace.lock_for(name):
            state = known_state(name)
            if state is None:
                return JSONResponse({"error": "unknown document"}, status_code=404)
            current = state.document
            if base_revision != current.revision:
                return JSONResponse(
                    {
                        "error": "stale_revision",
                        "revision": current.revision,
                        "document": document_to_json(current),
                    },
                    status_code=409,
                )
            try:
                commands = [command_from_json(obj) for obj in raw_commands]
            except InvalidCommand as exc:
                return JSONResponse(
                    {"error": "invalid_command", "message": str(exc)}, status_code=422
                )
            registry = workspace.registry_for(current)
            try:
                persisted, affected = workspace.apply_and_persist(state, commands, registry)
            except (DocumentError, InvalidCommand) as exc:
                return JSONResponse(
                    {"error": "invalid_command", "message": str(exc)}, status_code=422
                )
            return JSONResponse(
                {"revision": persisted.revision, "results": [{"id": a} for a in affected]}
            )

    @app.get("/api/docs/{name}/events")
    async def subscribe(name: str) -> Response:
        state = known_state(name)
        if state is None:
            return JSONResponse({"error": "unknown document"}, status_code=404)

        async def stream() -> AsyncIterator[str]:
            queue = workspace.subscribe(name)
            try:
                yield workspace.snapshot_frame(workspace.docs[name])
                while True:
                    try:
                        frame = await asyncio.wait_for(queue.get(), timeout=HEARTBEAT_SECONDS)
                    except asyncio.TimeoutError:
                        frame = _sse("heartbeat", {})
                    yield frame
            finally:
                workspace.unsubscribe(name, queue)

        return StreamingResponse(
            stream(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    if static_dir is not None and static_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="canvas")

    return app


def default_static_dir() -> Path:
    # repo layout: frontend/dist next to src/; absent in API-only installs
    return Path(__file__).resolve().parents[2] / "frontend" / "dist"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="blueprint-server", description=__doc__)
    parser.add_argument("--root", default=".", help="workspace directory (default: cwd)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=DEFAULT_PORT)
    parser.add_argument("--debounce-ms", type=int, default=DEFAULT_DEBOUNCE_MS)
    parser.add_argument("--poll-ms", type=int, default=DEFAULT_POLL_MS)
    parser.add_argument("--no-static", action="store_true", help="serve the API only")
    parser.add_argument("--static-dir", default=None, help="canvas bundle directory")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    root = Path(args.root).resolve()
    if not root.is_dir():
        print(f"error: workspace root {root} is not a directory", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    workspace = Workspace(root, debounce_ms=args.debounce_ms, poll_ms=args.poll_ms)
    static_dir: Path | None = None
    if not args.no_static:
        static_dir = Path(args.static_dir) if args.static_dir else default_static_dir()
    app = create_app(workspace, static_dir=static_dir)
    log.info("serving workspace %s on http://%s:%d", root, args.host, args.port)
    # long-lived event streams must not stall shutdown
    uvicorn.run(
        app,
        host=args.host,
        port=args.port,
        log_level="warning",
        timeout_graceful_shutdown=2,
    )
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
