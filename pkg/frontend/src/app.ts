// The canvas application: one document, rendered live, edited through
// the server's mutation API with optimistic revision checks.
//
// All semantic state lives in the document and the registry; the only
// client-side state is ephemeral view state (layout positions,
// selection, connection status), which never persists into the file.

import { ApiClient } from "./api.js";
import { Point, computeLayout, mergeLayout } from "./layout.js";
import { renderMarkdown } from "./markdown.js";
import { EventStreamClient } from "./sse.js";
import type {
  ChangePayload,
  ConnectionState,
  Diagnostic,
  DocumentData,
  MutationCommand,
  RegistryInfo,
} from "./types.js";
import { GraphView } from "./view.js";

export class CanvasApp {
  document: DocumentData | null = null;
  revision = 0;
  registry: RegistryInfo | null = null;
  diagnostics: Diagnostic[] = [];
  selection: string | null = null;
  connection: ConnectionState = "reconnecting";
  positions = new Map<string, Point>();

  private view!: GraphView;
  private stream: EventStreamClient | null = null;
  private lintFetchSeq = 0;

  // chrome elements, built once
  private titleEl!: HTMLElement;
  private typePicker!: HTMLSelectElement;
  private edgeTypePicker!: HTMLSelectElement;
  private labelInput!: HTMLInputElement;
  private connectionEl!: HTMLElement;
  private revisionEl!: HTMLElement;
  private bannerEl!: HTMLElement;
  private conflictEl!: HTMLElement;
  private editorEl!: HTMLElement;
  private lintListEl!: HTMLElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    readonly docName: string,
  ) {
    this.buildChrome();
  }

  async start(): Promise<void> {
    this.registry = await this.api.registry(this.docName).catch(() => null);
    this.fillTypePickers();
    const fetched = await this.api.getDocument(this.docName);
    this.applyDocument(fetched.document, fetched.revision, fetched.parseError);
    this.stream = new EventStreamClient(this.api.eventsUrl(this.docName), {
      onEvent: (event) => this.onStreamEvent(event.event, event.data),
      onConnectionChange: (connected) => {
        if (!connected) this.setConnection("reconnecting");
      },
    });
    this.stream.start();
  }

  stop(): void {
    this.stream?.stop();
  }

  // --- chrome ----------------------------------------------------------------

  private buildChrome(): void {
    this.root.innerHTML = `
      <div class="toolbar">
        <h1 id="doc-title"></h1>
        <select id="node-type-picker" title="node type"></select>
        <input id="new-node-label" type="text" placeholder="new node label">
        <button id="add-node">Add node</button>
        <select id="edge-type-picker" title="drag-edge type"></select>
        <span id="connection-state" class="badge reconnecting">connecting</span>
        <span id="revision" class="revision"></span>
      </div>
      <div id="error-banner" class="banner hidden"></div>
      <div id="conflict-notice" class="banner hidden"></div>
      <div class="main">
        <div class="canvas-wrap" id="canvas-wrap"></div>
        <div class="side">
          <section id="editor"><p class="lint-empty">Select a node or edge to edit it.</p></section>
          <section>
            <h2>Lint</h2>
            <ul id="lint-panel" class="lint-list"></ul>
            <p id="lint-empty" class="lint-empty hidden">No findings.</p>
          </section>
        </div>
      </div>`;
    this.titleEl = this.root.querySelector("#doc-title")!;
    this.typePicker = this.root.querySelector("#node-type-picker")!;
    this.edgeTypePicker = this.root.querySelector("#edge-type-picker")!;
    this.labelInput = this.root.querySelector("#new-node-label")!;
    this.connectionEl = this.root.querySelector("#connection-state")!;
    this.revisionEl = this.root.querySelector("#revision")!;
    this.bannerEl = this.root.querySelector("#error-banner")!;
    this.conflictEl = this.root.querySelector("#conflict-notice")!;
    this.editorEl = this.root.querySelector("#editor")!;
    this.lintListEl = this.root.querySelector("#lint-panel")!;
    this.titleEl.textContent = this.docName;

    this.root.querySelector("#add-node")!.addEventListener("click", () => void this.createNode());
    this.labelInput.addEventListener("keydown", (event) => {
      if ((event as KeyboardEvent).key === "Enter") void this.createNode();
    });
    document.addEventListener("keydown", (event) => {
      if (event.key === "Delete" && this.selection && document.activeElement === document.body) {
        void this.deleteSelection();
      }
    });

    this.view = new GraphView(this.root.querySelector("#canvas-wrap")!, {
      onSelect: (id) => this.select(id),
      onCycleStatus: (nodeId) => void this.cycleStatus(nodeId),
      onDrawEdge: (source, target) => void this.drawEdge(source, target),
    });
  }

  private fillTypePickers(): void {
    this.typePicker.textContent = "";
    for (const t of this.registry?.node_types ?? []) {
      const option = document.createElement("option");
      option.value = t.name;
      option.textContent = t.name;
      this.typePicker.appendChild(option);
    }
    if (this.typePicker.querySelector('option[value="claim"]')) this.typePicker.value = "claim";
    this.edgeTypePicker.textContent = "";
    for (const t of this.registry?.edge_types ?? []) {
      const option = document.createElement("option");
      option.value = t.name;
      option.textContent = `drag: ${t.name}`;
      this.edgeTypePicker.appendChild(option);
    }
    if (this.edgeTypePicker.querySelector('option[value="supports"]')) {
      this.edgeTypePicker.value = "supports"; // the load-bearing default
    }
  }

  // --- stream handling --------------------------------------------------------

  private onStreamEvent(kind: string, data: string): void {
    if (kind === "heartbeat") return;
    let payload: ChangePayload;
    try {
      payload = JSON.parse(data);
    } catch {
      return;
    }
    if (kind === "snapshot" || kind === "changed") {
      this.setConnection("live");
      if (payload.document) {
        this.applyDocument(payload.document, payload.revision ?? payload.document.revision, payload.error);
      }
    } else if (kind === "parse-error") {
      this.showBanner(`file has a parse error; showing revision ${payload.revision ?? "?"}: ${payload.error ?? ""}`);
    } else if (kind === "removed") {
      this.document = null;
      this.positions = new Map();
      this.selection = null;
      this.showBanner("document was removed from the workspace");
      this.renderAll();
    }
  }

  private applyDocument(doc: DocumentData, revision: number | null, parseError?: string): void {
    this.document = doc;
    this.revision = revision ?? doc.revision;
    this.positions = this.positions.size
      ? mergeLayout(this.positions, doc)
      : computeLayout(doc);
    if (this.selection && !this.findElement(this.selection)) this.selection = null;
    if (parseError) this.showBanner(`file has a parse error; showing last good revision: ${parseError}`);
    else this.hideBanner();
    this.renderAll();
    void this.refreshLint();
  }

  private findElement(id: string): { kind: "node" | "edge" } | null {
    if (!this.document) return null;
    if (this.document.nodes.some((n) => n.id === id)) return { kind: "node" };
    if (this.document.edges.some((e) => e.id === id)) return { kind: "edge" };
    return null;
  }

  // --- actions ---------------------------------------------------------------

  private async mutate(commands: MutationCommand[]): Promise<string[] | null> {
    if (!this.document) return null;
    const result = await this.api.mutate(this.docName, this.revision, commands);
    if (result.ok) {
      this.setConnection("live");
      this.hideConflict();
      return result.ids;
    }
    if (result.conflict) {
      // replay nothing: adopt the winning document and tell the user
      this.setConnection("conflict");
      this.showConflict(
        `edit rejected: the document moved to revision ${result.revision} under you; showing the server version`,
      );
      this.applyDocument(result.document, result.revision);
      return null;
    }
    this.showConflict(`edit rejected: ${result.message}`);
    return null;
  }

  async createNode(): Promise<void> {
    const label = this.labelInput.value.trim();
    const nodeType = this.typePicker.value || "claim";
    if (!label) {
      this.labelInput.focus();
      return;
    }
    const ids = await this.mutate([{ op: "add_node", node_type: nodeType, label }]);
    if (ids && ids.length) {
      this.labelInput.value = "";
      this.selection = ids[0];
    }
  }

  async cycleStatus(nodeId: string): Promise<void> {
    const node = this.document?.nodes.find((n) => n.id === nodeId);
    const ladder = this.registry?.node_types.find((t) => t.name === node?.type)?.ladder;
    if (!node || !ladder || ladder.length === 0) return;
    const index = ladder.indexOf(node.status);
    const next = index < 0 ? ladder[0] : ladder[(index + 1) % ladder.length];
    await this.mutate([{ op: "set_status", id: nodeId, status: next }]);
  }

  async drawEdge(source: string, target: string): Promise<void> {
    const edgeType = this.edgeTypePicker.value || "supports";
    await this.mutate([{ op: "add_edge", edge_type: edgeType, source, target }]);
  }

  async deleteSelection(): Promise<void> {
    if (!this.selection) return;
    const element = this.findElement(this.selection);
    if (!element) return;
    const op = element.kind === "node" ? "remove_node" : "remove_edge";
    const ids = await this.mutate([{ op, id: this.selection } as MutationCommand]);
    if (ids) this.selection = null;
  }

  select(id: string | null): void {
    this.selection = id;
    this.renderAll();
  }

  private async refreshLint(): Promise<void> {
    const seq = ++this.lintFetchSeq;
    for (let attempt = 0; attempt < 5; attempt++) {
      try {
        const diagnostics = await this.api.lint(this.docName);
        if (seq === this.lintFetchSeq) {
          this.diagnostics = diagnostics;
          this.renderLint();
        }
        return;
      } catch {
        if (seq !== this.lintFetchSeq) return; // a newer refresh took over
        await new Promise((resolve) => setTimeout(resolve, 300));
      }
    }
  }

  // --- rendering ---------------------------------------------------------------

  private setConnection(state: ConnectionState): void {
    this.connection = state;
    this.connectionEl.className = `badge ${state}`;
    this.connectionEl.textContent = state;
  }

  private showBanner(text: string): void {
    this.bannerEl.textContent = text;
    this.bannerEl.classList.remove("hidden");
  }

  private hideBanner(): void {
    this.bannerEl.classList.add("hidden");
  }

  private showConflict(text: string): void {
    this.conflictEl.textContent = text;
    this.conflictEl.classList.remove("hidden");
  }

  private hideConflict(): void {
    this.conflictEl.classList.add("hidden");
  }

  renderAll(): void {
    this.revisionEl.textContent = `rev ${this.revision}`;
    if (this.document) {
      this.view.render(this.document, this.positions, this.registry, this.selection);
    } else {
      this.view.render(
        { schema_version: "1", revision: 0, nodes: [], edges: [] },
        new Map(),
        this.registry,
        null,
      );
    }
    this.renderEditor();
    this.renderLint();
  }

  private renderEditor(): void {
    const active = document.activeElement;
    if (active && this.editorEl.contains(active) && (active as HTMLElement).tagName !== "BUTTON") {
      return; // don't clobber an edit in progress
    }
    this.editorEl.textContent = "";
    if (!this.selection || !this.document) {
      this.editorEl.innerHTML = '<p class="lint-empty">Select a node or edge to edit it.</p>';
      return;
    }
    const node = this.document.nodes.find((n) => n.id === this.selection);
    const edge = this.document.edges.find((e) => e.id === this.selection);

    const heading = document.createElement("h2");
    const body = document.createElement("textarea");
    body.id = "edit-body";
    body.value = (node?.body ?? edge?.body) ?? "";
    const preview = document.createElement("div");
    preview.id = "body-preview";
    preview.className = "preview";
    renderMarkdown(body.value, preview);
    body.addEventListener("input", () => renderMarkdown(body.value, preview));

    if (node) {
      heading.textContent = `${node.id} (${node.type})`;
      this.editorEl.appendChild(heading);

      const labelLabel = document.createElement("label");
      labelLabel.textContent = "Label";
      const label = document.createElement("input");
      label.type = "text";
      label.id = "edit-label";
      label.value = node.label;
      this.editorEl.append(labelLabel, label);

      const saveLabel = document.createElement("button");
      saveLabel.id = "save-label";
      saveLabel.textContent = "Save label";
      saveLabel.addEventListener("click", () =>
        void this.mutate([{ op: "set_label", id: node.id, label: label.value }]),
      );

      const bodyLabel = document.createElement("label");
      bodyLabel.textContent = "Body (Markdown + math)";
      const saveBody = document.createElement("button");
      saveBody.id = "save-body";
      saveBody.textContent = "Save body";
      saveBody.addEventListener("click", () =>
        void this.mutate([{ op: "set_body", id: node.id, body: body.value === "" ? null : body.value }]),
      );

      const cycle = document.createElement("button");
      cycle.id = "cycle-status";
      cycle.textContent = `status: ${node.status} →`;
      cycle.addEventListener("click", () => void this.cycleStatus(node.id));

      const del = document.createElement("button");
      del.id = "delete-element";
      del.className = "danger";
      del.textContent = "Delete node";
      del.addEventListener("click", () => void this.deleteSelection());

      this.editorEl.append(saveLabel, bodyLabel, body, preview, saveBody, cycle, del);
    } else if (edge) {
      heading.textContent = `${edge.id} (${edge.type})`;
      const route = document.createElement("p");
      route.textContent = `${edge.source} → ${edge.target}`;
      this.editorEl.append(heading, route);

      const bodyLabel = document.createElement("label");
      bodyLabel.textContent = "Body (why the source backs the target)";
      const saveBody = document.createElement("button");
      saveBody.id = "save-body";
      saveBody.textContent = "Save body";
      saveBody.addEventListener("click", () =>
        void this.mutate([{ op: "set_body", id: edge.id, body: body.value === "" ? null : body.value }]),
      );
      const del = document.createElement("button");
      del.id = "delete-element";
      del.className = "danger";
      del.textContent = "Delete edge";
      del.addEventListener("click", () => void this.deleteSelection());

      this.editorEl.append(bodyLabel, body, preview, saveBody, del);
    }
  }

  private renderLint(): void {
    this.lintListEl.textContent = "";
    const empty = this.root.querySelector("#lint-empty")!;
    empty.classList.toggle("hidden", this.diagnostics.length !== 0);
    for (const finding of this.diagnostics) {
      const item = document.createElement("li");
      item.setAttribute("data-subject", finding.subject);
      item.setAttribute("data-rule", finding.rule);
      const rule = document.createElement("span");
      rule.className = "lint-rule";
      rule.textContent = finding.rule;
      const message = document.createElement("div");
      message.textContent = finding.message;
      item.append(rule, message);
      item.addEventListener("click", () => {
        this.select(finding.subject);
        const element = this.root.querySelector(
          `[data-node-id="${finding.subject}"], [data-edge-id="${finding.subject}"]`,
        );
        if (element && typeof element.scrollIntoView === "function") {
          element.scrollIntoView({ block: "center", inline: "center" });
        }
      });
      this.lintListEl.appendChild(item);
    }
  }
}
