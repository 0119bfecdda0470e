// SVG rendering of the graph plus pointer interactions: select, cycle
// status, drag from a node's rim handle to draw an edge.

import { NODE_HEIGHT, NODE_WIDTH, Point, canvasExtent } from "./layout.js";
import type { DocumentData, EdgeData, NodeData, RegistryInfo } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const ROLE_COLORS: Record<string, { stroke: string; fill: string }> = {
  "argument-core": { stroke: "#2563eb", fill: "#dbeafe" },
  "construction-handle": { stroke: "#0d9488", fill: "#ccfbf1" },
  "review-channel": { stroke: "#dc2626", fill: "#fee2e2" },
  "flexibility-valve": { stroke: "#7c3aed", fill: "#ede9fe" },
};
const UNKNOWN_COLORS = { stroke: "#6b7280", fill: "#f3f4f6" };

const EDGE_STYLES: Record<string, { stroke: string; dash?: string; width: number }> = {
  supports: { stroke: "#334155", width: 1.8 },
  expands: { stroke: "#0d9488", dash: "6 4", width: 1.4 },
  contradicts: { stroke: "#dc2626", width: 2.2 },
  addresses: { stroke: "#16a34a", dash: "2 3", width: 1.6 },
  relates: { stroke: "#94a3b8", dash: "6 4", width: 1.2 },
};
const UNKNOWN_EDGE = { stroke: "#9ca3af", dash: "2 2", width: 1.2 };

export interface ViewCallbacks {
  onSelect(id: string | null): void;
  onCycleStatus(nodeId: string): void;
  onDrawEdge(source: string, target: string): void;
}

export class GraphView {
  readonly svg: SVGSVGElement;
  private positions = new Map<string, Point>();
  private pendingSource: string | null = null;
  private pendingLine: SVGLineElement | null = null;

  constructor(container: HTMLElement, private readonly callbacks: ViewCallbacks) {
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.classList.add("canvas");
    this.svg.setAttribute("data-testid", "graph-canvas");
    container.appendChild(this.svg);

    this.svg.addEventListener("mousedown", (event) => {
      const handle = (event.target as Element).closest<SVGElement>("[data-edge-handle]");
      if (handle) {
        event.preventDefault();
        this.beginEdgeDrag(handle.getAttribute("data-edge-handle")!);
      }
    });
    this.svg.addEventListener("mousemove", (event) => {
      if (this.pendingLine && this.pendingSource) {
        const point = this.eventPoint(event);
        this.pendingLine.setAttribute("x2", String(point.x));
        this.pendingLine.setAttribute("y2", String(point.y));
      }
    });
    this.svg.addEventListener("mouseup", (event) => {
      const nodeEl = (event.target as Element).closest<SVGElement>("[data-node-id]");
      if (this.pendingSource) {
        const target = nodeEl?.getAttribute("data-node-id") ?? null;
        const source = this.pendingSource;
        this.cancelEdgeDrag();
        if (target && target !== source) this.callbacks.onDrawEdge(source, target);
      }
    });
    this.svg.addEventListener("click", (event) => {
      const target = event.target as Element;
      const status = target.closest<SVGElement>("[data-status-for]");
      if (status) {
        this.callbacks.onCycleStatus(status.getAttribute("data-status-for")!);
        event.stopPropagation();
        return;
      }
      const nodeEl = target.closest<SVGElement>("[data-node-id]");
      if (nodeEl) {
        this.callbacks.onSelect(nodeEl.getAttribute("data-node-id"));
        return;
      }
      const edgeEl = target.closest<SVGElement>("[data-edge-id]");
      if (edgeEl) {
        this.callbacks.onSelect(edgeEl.getAttribute("data-edge-id"));
        return;
      }
      this.callbacks.onSelect(null);
    });
  }

  private eventPoint(event: MouseEvent): Point {
    const rect = this.svg.getBoundingClientRect();
    return { x: event.clientX - rect.left, y: event.clientY - rect.top };
  }

  private beginEdgeDrag(source: string): void {
    this.pendingSource = source;
    const from = this.anchor(source);
    const line = document.createElementNS(SVG_NS, "line");
    line.classList.add("pending-edge");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(from.x));
    line.setAttribute("y2", String(from.y));
    this.svg.appendChild(line);
    this.pendingLine = line;
  }

  private cancelEdgeDrag(): void {
    this.pendingLine?.remove();
    this.pendingLine = null;
    this.pendingSource = null;
  }

  private anchor(id: string): Point {
    const p = this.positions.get(id) ?? { x: 0, y: 0 };
    return { x: p.x + NODE_WIDTH / 2, y: p.y + NODE_HEIGHT / 2 };
  }

  render(
    doc: DocumentData,
    positions: Map<string, Point>,
    registry: RegistryInfo | null,
    selection: string | null,
  ): void {
    this.positions = positions;
    this.cancelEdgeDrag();
    this.svg.textContent = "";
    const { width, height } = canvasExtent(positions);
    this.svg.setAttribute("width", String(width));
    this.svg.setAttribute("height", String(height));
    this.svg.setAttribute("viewBox", `0 0 ${width} ${height}`);

    this.svg.appendChild(this.buildDefs());
    const present = new Set(doc.nodes.map((n) => n.id));
    for (const edge of doc.edges) {
      if (present.has(edge.source) && present.has(edge.target)) {
        this.svg.appendChild(this.renderEdge(edge, selection));
      }
    }
    const roles = new Map<string, string>(
      (registry?.node_types ?? []).map((t) => [t.name, t.role]),
    );
    for (const node of doc.nodes) {
      this.svg.appendChild(this.renderNode(node, roles.get(node.type), selection));
    }
  }

  private buildDefs(): SVGDefsElement {
    const defs = document.createElementNS(SVG_NS, "defs");
    for (const [name, style] of Object.entries({ ...EDGE_STYLES, unknown: UNKNOWN_EDGE })) {
      const marker = document.createElementNS(SVG_NS, "marker");
      marker.setAttribute("id", `arrow-${name}`);
      marker.setAttribute("viewBox", "0 0 10 10");
      marker.setAttribute("refX", "9");
      marker.setAttribute("refY", "5");
      marker.setAttribute("markerWidth", "7");
      marker.setAttribute("markerHeight", "7");
      marker.setAttribute("orient", "auto-start-reverse");
      const tip = document.createElementNS(SVG_NS, "path");
      tip.setAttribute("d", "M 0 0 L 10 5 L 0 10 z");
      tip.setAttribute("fill", style.stroke);
      marker.appendChild(tip);
      defs.appendChild(marker);
    }
    return defs;
  }

  private renderEdge(edge: EdgeData, selection: string | null): SVGGElement {
    const group = document.createElementNS(SVG_NS, "g");
    group.setAttribute("data-edge-id", edge.id);
    const style = EDGE_STYLES[edge.type] ?? UNKNOWN_EDGE;
    const from = this.anchor(edge.source);
    const to = this.anchor(edge.target);

    let d: string;
    let labelAt: Point;
    if (edge.source === edge.target) {
      d = `M ${from.x + 30} ${from.y} C ${from.x + 95} ${from.y - 45}, ${from.x + 95} ${from.y + 45}, ${from.x + 30} ${from.y}`;
      labelAt = { x: from.x + 86, y: from.y };
    } else {
      const mid = { x: (from.x + to.x) / 2, y: (from.y + to.y) / 2 };
      d = `M ${from.x} ${from.y} L ${to.x} ${to.y}`;
      labelAt = mid;
    }

    const hit = document.createElementNS(SVG_NS, "path");
    hit.classList.add("edge-hit");
    hit.setAttribute("d", d);
    group.appendChild(hit);

    const path = document.createElementNS(SVG_NS, "path");
    path.classList.add("edge");
    path.setAttribute("d", d);
    path.setAttribute("stroke", style.stroke);
    path.setAttribute("stroke-width", String(selection === edge.id ? style.width + 1.2 : style.width));
    if (style.dash) path.setAttribute("stroke-dasharray", style.dash);
    const markerName = EDGE_STYLES[edge.type] ? edge.type : "unknown";
    path.setAttribute("marker-end", `url(#arrow-${markerName})`);
    group.appendChild(path);

    const label = document.createElementNS(SVG_NS, "text");
    label.classList.add("edge-label");
    label.setAttribute("x", String(labelAt.x));
    label.setAttribute("y", String(labelAt.y - 4));
    label.textContent = edge.type;
    group.appendChild(label);
    return group;
  }

  private renderNode(node: NodeData, role: string | undefined, selection: string | null): SVGGElement {
    const colors = role ? ROLE_COLORS[role] ?? UNKNOWN_COLORS : UNKNOWN_COLORS;
    const p = this.positions.get(node.id) ?? { x: 0, y: 0 };
    const group = document.createElementNS(SVG_NS, "g");
    group.classList.add("node");
    if (selection === node.id) group.classList.add("selected");
    group.setAttribute("data-node-id", node.id);
    group.setAttribute("transform", `translate(${p.x}, ${p.y})`);

    const box = document.createElementNS(SVG_NS, "rect");
    box.classList.add("box");
    box.setAttribute("width", String(NODE_WIDTH));
    box.setAttribute("height", String(NODE_HEIGHT));
    box.setAttribute("rx", "10");
    box.setAttribute("fill", colors.fill);
    box.setAttribute("stroke", colors.stroke);
    if (!role) box.setAttribute("stroke-dasharray", "4 3");
    group.appendChild(box);

    const typeBadge = document.createElementNS(SVG_NS, "text");
    typeBadge.classList.add("type-badge");
    typeBadge.setAttribute("x", "8");
    typeBadge.setAttribute("y", "14");
    typeBadge.textContent = `${node.type} · ${node.id}`;
    group.appendChild(typeBadge);

    const label = document.createElementNS(SVG_NS, "text");
    label.classList.add("label");
    label.setAttribute("x", "8");
    label.setAttribute("y", "32");
    const text = node.label === "" ? "(no label)" : node.label;
    label.textContent = text.length > 21 ? `${text.slice(0, 20)}…` : text;
    group.appendChild(label);

    const pill = document.createElementNS(SVG_NS, "rect");
    pill.classList.add("status-pill");
    pill.setAttribute("data-status-for", node.id);
    pill.setAttribute("x", "6");
    pill.setAttribute("y", String(NODE_HEIGHT - 17));
    pill.setAttribute("width", String(10 + 6 * node.status.length));
    pill.setAttribute("height", "13");
    pill.setAttribute("rx", "6");
    pill.setAttribute("fill", "#ffffff");
    pill.setAttribute("stroke", colors.stroke);
    group.appendChild(pill);

    const status = document.createElementNS(SVG_NS, "text");
    status.classList.add("status-badge");
    status.setAttribute("data-status-for", node.id);
    status.setAttribute("x", "11");
    status.setAttribute("y", String(NODE_HEIGHT - 7));
    status.textContent = node.status;
    group.appendChild(status);

    const handle = document.createElementNS(SVG_NS, "circle");
    handle.classList.add("edge-handle");
    handle.setAttribute("data-edge-handle", node.id);
    handle.setAttribute("cx", String(NODE_WIDTH));
    handle.setAttribute("cy", String(NODE_HEIGHT / 2));
    handle.setAttribute("r", "6");
    group.appendChild(handle);

    return group;
  }
}
