// Scripted browser-style test: the real canvas code runs in jsdom
// against a real sync server, with read-backs through the real CLI.

import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, test } from "vitest";

import { ApiClient } from "../src/api.js";
import { CanvasApp } from "../src/app.js";

const execFileAsync = promisify(execFile);

const PYTHON = process.env.PYTHON ?? "python3";

let workdir: string;
let server: ChildProcess;
let base: string;
let docPath: string;

async function cli(...args: string[]): Promise<string> {
  const { stdout } = await execFileAsync(PYTHON, ["-m", "blueprint.cli", ...args], {
    cwd: workdir,
  });
  return stdout;
}

async function cliJson(...args: string[]): Promise<any> {
  return JSON.parse(await cli(...args, "--json"));
}

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address && typeof address === "object") {
        const port = address.port;
        probe.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

async function waitFor(cond: () => boolean, what: string, timeoutMs = 15000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (!cond()) {
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

/** Wait until the server's watcher has folded the file in at the wanted revision. */
async function waitForServerDoc(name: string, minRevision = 0): Promise<void> {
  const deadline = Date.now() + 10000;
  for (;;) {
    try {
      const response = await fetch(`${base}/api/docs/${name}`);
      if (response.ok) {
        const revision = Number(response.headers.get("x-blueprint-revision") ?? "-1");
        if (revision >= minRevision) return;
      }
    } catch {
      // server momentarily unreachable
    }
    if (Date.now() > deadline) throw new Error(`server never saw ${name} at rev ${minRevision}`);
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
}

function click(el: Element): void {
  el.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "canvas-test-"));
  docPath = join(workdir, "demo.blueprint.json");
  await cli("init", docPath);
  const port = await freePort();
  base = `http://127.0.0.1:${port}`;
  server = spawn(
    PYTHON,
    ["-m", "blueprint.server", "--root", workdir, "--port", String(port), "--no-static"],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  const deadline = Date.now() + 20000;
  for (;;) {
    try {
      const response = await fetch(`${base}/api/docs/demo`);
      if (response.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("sync server never became ready");
    await new Promise((resolve) => setTimeout(resolve, 50));
  }
});

afterAll(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

describe("canvas round-trip through the shared document", () => {
  let root: HTMLElement;
  let app: CanvasApp;

  beforeAll(async () => {
    root = document.createElement("div");
    document.body.appendChild(root);
    app = new CanvasApp(root, new ApiClient(base), "demo");
    await app.start();
    await waitFor(() => app.connection === "live" && app.document !== null, "live connection");
  });

  afterAll(() => {
    app.stop();
    root.remove();
  });

  test("creating a node in the canvas is visible to the CLI", async () => {
    const picker = root.querySelector<HTMLSelectElement>("#node-type-picker")!;
    expect([...picker.options].map((o) => o.value)).toContain("claim"); // seeded from the registry
    picker.value = "claim";
    root.querySelector<HTMLInputElement>("#new-node-label")!.value = "Made on the canvas";
    click(root.querySelector("#add-node")!);
    await waitFor(() => (app.document?.nodes.length ?? 0) === 1, "node to appear");

    const listed = await cliJson("list", "--file", docPath);
    expect(listed).toEqual([
      { id: "claim-1", type: "claim", status: "draft", label: "Made on the canvas" },
    ]);
    expect(root.querySelector('[data-node-id="claim-1"]')).not.toBeNull();
  });

  test("editing the body changes exactly that field", async () => {
    const before = (await cliJson("show", "claim-1", "--file", docPath)).nodes[0];
    click(root.querySelector('[data-node-id="claim-1"]')!);
    await waitFor(() => root.querySelector("#edit-body") !== null, "editor to open");
    const body = root.querySelector<HTMLTextAreaElement>("#edit-body")!;
    body.value = "Grounded in $E = mc^2$ **everywhere**";
    body.dispatchEvent(new Event("input", { bubbles: true }));
    expect(root.querySelector("#body-preview")!.innerHTML).toContain("katex");
    body.blur();
    click(root.querySelector("#save-body")!);
    await waitFor(() => app.document?.nodes[0]?.body !== undefined, "body to save");

    const after = (await cliJson("show", "claim-1", "--file", docPath)).nodes[0];
    expect(after.body).toBe("Grounded in $E = mc^2$ **everywhere**");
    expect({ ...after, body: undefined }).toEqual({ ...before, body: undefined });
  });

  test("clicking the status badge advances along the ladder", async () => {
    click(root.querySelector('[data-status-for="claim-1"]')!);
    await waitFor(() => app.document?.nodes[0]?.status === "stated", "status to advance");
    const shown = await cliJson("list", "--type", "claim", "--file", docPath);
    expect(shown[0].status).toBe("stated");
  });

  test("dragging from a node handle draws a supports edge", async () => {
    await cli("node", "add", "evidence", "Measured", "--file", docPath);
    await waitFor(() => root.querySelector('[data-node-id="evidence-1"]') !== null, "CLI node to stream in");

    const handle = root.querySelector('[data-edge-handle="evidence-1"]')!;
    handle.dispatchEvent(new MouseEvent("mousedown", { bubbles: true }));
    root
      .querySelector('[data-node-id="claim-1"]')!
      .dispatchEvent(new MouseEvent("mouseup", { bubbles: true }));
    await waitFor(() => (app.document?.edges.length ?? 0) === 1, "edge to appear");

    const doc = await cliJson("show", "claim-1", "--file", docPath);
    expect(doc.edges).toEqual([
      { id: "supports-1", type: "supports", source: "evidence-1", target: "claim-1" },
    ]);
  });

  test("a CLI edit appears in the open canvas without reload", async () => {
    await cli("node", "add", "question", "Open thread", "--file", docPath);
    await waitFor(
      () => root.querySelector('[data-node-id="question-1"]') !== null,
      "question node in the DOM",
    );
    expect(app.document!.nodes.map((n) => n.id)).toContain("question-1");
  });

  test("a stale edit gets the server version and a conflict notice", async () => {
    app.stop(); // canvas goes quiet; CLI advances the document under it
    const staleRevision = app.revision;
    await cli("node", "status", "question-1", "answered", "--file", docPath);
    await waitForServerDoc("demo", staleRevision + 1); // watcher folds the CLI write
    root.querySelector<HTMLInputElement>("#new-node-label")!.value = "Too late";
    click(root.querySelector("#add-node")!);
    await waitFor(() => app.revision > staleRevision, "server version adopted");
    expect(root.querySelector("#conflict-notice")!.classList.contains("hidden")).toBe(false);
    expect(app.document!.nodes.some((n) => n.label === "Too late")).toBe(false);
    const answered = app.document!.nodes.find((n) => n.id === "question-1")!;
    expect(answered.status).toBe("answered");
  });
});

describe("lint panel parity", () => {
  test("panel findings equal lint --json for the same fixture", async () => {
    const fixturePath = join(workdir, "fixture.blueprint.json");
    await cli("init", fixturePath);
    await cli("node", "add", "claim", "Unsupported", "--file", fixturePath);
    await cli("node", "status", "claim-1", "supported", "--file", fixturePath);
    await cli("node", "add", "evidence", "Hollow", "--file", fixturePath);
    await cli("node", "status", "evidence-1", "cited", "--file", fixturePath);
    await waitForServerDoc("fixture", 4);

    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = new CanvasApp(root, new ApiClient(base), "fixture");
    try {
      await app.start();
      await waitFor(() => app.diagnostics.length > 0, "lint panel to fill");

      const expected = await cliJson("lint", "--file", fixturePath);
      expect(app.diagnostics).toEqual(expected);

      const items = [...root.querySelectorAll("#lint-panel li")];
      expect(
        items.map((item) => ({
          rule: item.getAttribute("data-rule"),
          subject: item.getAttribute("data-subject"),
        })),
      ).toEqual(expected.map((d: any) => ({ rule: d.rule, subject: d.subject })));

      // clicking a finding focuses its subject element
      click(items[0]);
      await waitFor(() => app.selection === expected[0].subject, "subject selected");
      expect(
        root.querySelector(`[data-node-id="${expected[0].subject}"]`)!.classList.contains("selected"),
      ).toBe(true);
    } finally {
      app.stop();
      root.remove();
    }
  });

  test("clean document shows an empty panel", async () => {
    const cleanPath = join(workdir, "clean.blueprint.json");
    await cli("init", cleanPath);
    await waitForServerDoc("clean");
    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = new CanvasApp(root, new ApiClient(base), "clean");
    try {
      await app.start();
      await waitFor(() => app.connection === "live", "live connection");
      expect(root.querySelectorAll("#lint-panel li").length).toBe(0);
    } finally {
      app.stop();
      root.remove();
    }
  });
});
