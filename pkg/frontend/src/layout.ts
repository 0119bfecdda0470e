// Deterministic automatic layout: conclusions on top, supporters below.
//
// A node's layer is its longest chain of outgoing supports edges (back
// edges in cycles count zero, so cyclic documents still lay out). Layer
// 0 holds conclusions and everything outside the support structure.
// Positions are a pure function of the document, so re-rendering the
// same revision lands every node in the same place.

import type { DocumentData } from "./types.js";

export interface Point {
  x: number;
  y: number;
}

export const NODE_WIDTH = 150;
export const NODE_HEIGHT = 54;
const H_GAP = 40;
const V_GAP = 70;
const MARGIN = 60;

export function computeLayers(doc: DocumentData): Map<string, number> {
  const ids = doc.nodes.map((n) => n.id).sort();
  const present = new Set(ids);
  const out = new Map<string, string[]>();
  for (const edge of doc.edges) {
    if (edge.type !== "supports") continue;
    if (!present.has(edge.source) || !present.has(edge.target)) continue;
    const targets = out.get(edge.source) ?? [];
    targets.push(edge.target);
    out.set(edge.source, targets);
  }
  for (const targets of out.values()) targets.sort();

  const layers = new Map<string, number>();
  const onStack = new Set<string>();

  const layerOf = (id: string): number => {
    const known = layers.get(id);
    if (known !== undefined) return known;
    if (onStack.has(id)) return 0; // cycle: treat the back edge as flat
    onStack.add(id);
    let layer = 0;
    for (const target of out.get(id) ?? []) {
      layer = Math.max(layer, layerOf(target) + 1);
    }
    onStack.delete(id);
    layers.set(id, layer);
    return layer;
  };

  for (const id of ids) layerOf(id);
  return layers;
}

export function computeLayout(doc: DocumentData): Map<string, Point> {
  const layers = computeLayers(doc);
  const byLayer = new Map<number, string[]>();
  for (const [id, layer] of layers) {
    const row = byLayer.get(layer) ?? [];
    row.push(id);
    byLayer.set(layer, row);
  }
  const positions = new Map<string, Point>();
  for (const [layer, row] of byLayer) {
    row.sort();
    row.forEach((id, index) => {
      positions.set(id, {
        x: MARGIN + index * (NODE_WIDTH + H_GAP),
        y: MARGIN + layer * (NODE_HEIGHT + V_GAP),
      });
    });
  }
  return positions;
}

/** Keep surviving nodes where they are; place only newcomers. */
export function mergeLayout(previous: Map<string, Point>, doc: DocumentData): Map<string, Point> {
  const fresh = computeLayout(doc);
  const merged = new Map<string, Point>();
  const taken: Point[] = [];
  const collides = (p: Point) =>
    taken.some((q) => Math.abs(q.x - p.x) < NODE_WIDTH * 0.6 && Math.abs(q.y - p.y) < NODE_HEIGHT * 0.8);

  for (const node of doc.nodes) {
    const kept = previous.get(node.id);
    if (kept) {
      merged.set(node.id, kept);
      taken.push(kept);
    }
  }
  for (const node of doc.nodes) {
    if (merged.has(node.id)) continue;
    const spot = { ...(fresh.get(node.id) ?? { x: MARGIN, y: MARGIN }) };
    while (collides(spot)) spot.x += NODE_WIDTH + H_GAP;
    merged.set(node.id, spot);
    taken.push(spot);
  }
  return merged;
}

export function canvasExtent(positions: Map<string, Point>): { width: number; height: number } {
  let width = 900;
  let height = 600;
  for (const p of positions.values()) {
    width = Math.max(width, p.x + NODE_WIDTH + MARGIN);
    height = Math.max(height, p.y + NODE_HEIGHT + MARGIN);
  }
  return { width, height };
}
