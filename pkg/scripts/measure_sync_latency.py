#!/usr/bin/env python3
"""Measure disk-write to event-delivery latency through the sync server.

Starts a server on a scratch workspace, subscribes over SSE, performs N
CLI mutations, and reports the latency distribution. This is the same
measurement the acceptance suite pins at p95 <= 200 ms.
"""

from __future__ import annotations

import argparse
import json
import queue
import socket
import statistics
import subprocess
import sys
import tempfile
import threading
import time
from pathlib import Path

import httpx

from blueprint.cli import main as cli_main


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def subscribe(url: str, events: "queue.Queue[tuple[dict, float]]") -> threading.Thread:
    def reader() -> None:
        try:
            with httpx.stream("GET", url, timeout=httpx.Timeout(10, read=120)) as response:
                kind = None
                for line in response.iter_lines():
                    if line.startswith("event: "):
                        kind = line[7:]
                    elif line.startswith("data: ") and kind == "changed":
                        events.put((json.loads(line[6:]), time.monotonic()))
        except (httpx.HTTPError, OSError):
            pass  # server shut down; the measurement loop is already done

    thread = threading.Thread(target=reader, daemon=True)
    thread.start()
    return thread


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mutations", type=int, default=100)
    parser.add_argument("--debounce-ms", type=int, default=50)
    parser.add_argument("--poll-ms", type=int, default=25)
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        port = free_port()
        server = subprocess.Popen(
            [
                sys.executable, "-m", "blueprint.server",
                "--root", str(root), "--port", str(port), "--no-static",
                "--debounce-ms", str(args.debounce_ms), "--poll-ms", str(args.poll_ms),
            ],
            stdout=subprocess.DEVNULL,
            stderr=subprocess.DEVNULL,
        )
        base = f"http://127.0.0.1:{port}"
        try:
            path = root / "bench.blueprint.json"
            cli_main(["init", str(path)])
            deadline = time.monotonic() + 15
            while True:
                try:
                    if httpx.get(f"{base}/api/docs/bench", timeout=1).status_code == 200:
                        break
                except httpx.HTTPError:
                    pass
                if time.monotonic() > deadline:
                    print("server never became ready", file=sys.stderr)
                    return 1
                time.sleep(0.05)

            events: "queue.Queue[tuple[dict, float]]" = queue.Queue()
            subscribe(f"{base}/api/docs/bench/events", events)
            time.sleep(0.3)  # let the stream settle

            latencies = []
            for i in range(1, args.mutations + 1):
                t0 = time.monotonic()
                cli_main(["node", "add", "claim", f"claim {i}", "--file", str(path)])
                while True:
                    payload, t_received = events.get(timeout=10)
                    if payload["revision"] >= i:
                        latencies.append(t_received - t0)
                        break

            latencies.sort()
            quantile = lambda q: latencies[min(len(latencies) - 1, int(q * len(latencies)))]
            print(f"mutations: {len(latencies)}")
            print(f"p50:  {quantile(0.50) * 1000:6.1f} ms")
            print(f"p90:  {quantile(0.90) * 1000:6.1f} ms")
            print(f"p95:  {quantile(0.95) * 1000:6.1f} ms")
            print(f"max:  {latencies[-1] * 1000:6.1f} ms")
            print(f"mean: {statistics.mean(latencies) * 1000:6.1f} ms")
            return 0
        finally:
            server.terminate()
            try:
                server.wait(timeout=10)
            except subprocess.TimeoutExpired:
                server.kill()


if __name__ == "__main__":
    sys.exit(main())
