// Wire types shared with the sync server.

export interface NodeData {
  id: string;
  type: string;
  status: string;
  label: string;
  body?: string;
}

export interface EdgeData {
  id: string;
  type: string;
  source: string;
  target: string;
  body?: string;
}

export interface DocumentData {
  schema_version: string;
  title?: string;
  vocabulary?: unknown;
  revision: number;
  nodes: NodeData[];
  edges: EdgeData[];
}

export interface Diagnostic {
  rule: string;
  subject: string;
  message: string;
}

export interface NodeTypeInfo {
  name: string;
  role: string;
  ladder: string[];
  matured: string[];
  provenance: string;
}

export interface EdgeTypeInfo {
  name: string;
  sources: string[];
  targets: string[];
  symmetric: boolean;
  provenance: string;
}

export interface RegistryInfo {
  node_types: NodeTypeInfo[];
  edge_types: EdgeTypeInfo[];
}

export type MutationCommand =
  | { op: "add_node"; node_type: string; label: string; body?: string; id?: string }
  | { op: "add_edge"; edge_type: string; source: string; target: string; body?: string; id?: string }
  | { op: "set_status"; id: string; status: string }
  | { op: "set_label"; id: string; label: string }
  | { op: "set_body"; id: string; body: string | null }
  | { op: "remove_node"; id: string }
  | { op: "remove_edge"; id: string };

export interface ChangePayload {
  doc: string;
  kind: string;
  revision: number | null;
  document?: DocumentData | null;
  error?: string;
}

export type ConnectionState = "live" | "reconnecting" | "conflict";
