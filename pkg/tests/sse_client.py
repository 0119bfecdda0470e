"""Minimal server-sent-events test client (background thread + httpx)."""

from __future__ import annotations

import json
import queue
import threading
import time
from typing import Any, Callable

import httpx


class SseClient:
    """Subscribes to one document's event stream and queues its events."""

    def __init__(self, base_url: str, doc_name: str, connect_timeout: float = 10.0):
        self.url = f"{base_url}/api/docs/{doc_name}/events"
        self.events: "queue.Queue[tuple[str, Any, float]]" = queue.Queue()
        self.connected = threading.Event()
        self.failed: Exception | None = None
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()
        if not self.connected.wait(connect_timeout):
            raise TimeoutError(f"no SSE connection to {self.url}")
        if self.failed is not None:
            raise self.failed

    def _run(self) -> None:
        try:
            timeout = httpx.Timeout(10.0, read=60.0)
            with httpx.stream("GET", self.url, timeout=timeout) as response:
                if response.status_code != 200:
                    self.failed = RuntimeError(f"subscribe failed: {response.status_code}")
                    self.connected.set()
                    return
                self.connected.set()
                kind = None
                for line in response.iter_lines():
                    if line.startswith("event: "):
                        kind = line[len("event: "):]
                    elif line.startswith("data: ") and kind is not None:
                        payload = json.loads(line[len("data: "):])
                        self.events.put((kind, payload, time.monotonic()))
        except (httpx.HTTPError, OSError):
            self.connected.set()  # stream torn down; tests notice via timeouts

    def next_event(self, timeout: float = 5.0, skip_heartbeats: bool = True) -> tuple[str, Any, float]:
        deadline = time.monotonic() + timeout
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise TimeoutError("no event before timeout")
            try:
                kind, payload, received = self.events.get(timeout=remaining)
            except queue.Empty:
                raise TimeoutError("no event before timeout") from None
            if skip_heartbeats and kind == "heartbeat":
                continue
            return kind, payload, received

    def wait_for(
        self,
        kind: str,
        predicate: Callable[[Any], bool] | None = None,
        timeout: float = 5.0,
    ) -> tuple[str, Any, float]:
        deadline = time.monotonic() + timeout
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                raise TimeoutError(f"no {kind} event before timeout")
            got_kind, payload, received = self.next_event(timeout=remaining)
            if got_kind == kind and (predicate is None or predicate(payload)):
                return got_kind, payload, received
