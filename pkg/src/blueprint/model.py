"""Blueprint documents: a typed argument graph stored as one JSON file.

A document holds typed, statused nodes and typed edges, an optional
embedded vocabulary override, and a revision counter bumped by whichever
process persists the file. Documents are immutable values: every
mutation returns a new document.

The canonical serialized form (fixed key order, id-sorted elements,
two-space indent, trailing newline) makes files diff-friendly and gives
round-trip tests an exact target. Unknown node/edge types and statuses
survive parsing untouched; judging them is lint's job, not the parser's.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Any, Iterable, Mapping

from .vocabulary import SUPPORTS, VocabularyRegistry, resolve_vocabulary

SCHEMA_VERSION = "1"
BLUEPRINT_SUFFIX = ".blueprint.json"

_ID_RE = re.compile(r"[a-z0-9][a-z0-9-]*\Z")


class BlueprintError(Exception):
    """Base class for all blueprint errors."""


class ParseError(BlueprintError):
    """The text is not a valid blueprint document."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class DocumentError(BlueprintError):
    """A mutation or query was applied to an element it cannot target."""


class UnknownElement(DocumentError):
    pass


class UnknownNode(UnknownElement):
    pass


class UnknownEndpoint(UnknownElement):
    pass


class DuplicateId(DocumentError):
    pass


class InvalidId(DocumentError):
    pass


class InvalidCommand(BlueprintError):
    """A mutation command object has the wrong shape."""


def _check_id(value: str) -> None:
    if not isinstance(value, str) or not _ID_RE.match(value):
        raise InvalidId(
            f"id {value!r} is invalid: ids are non-empty, lowercase, and match [a-z0-9][a-z0-9-]*"
        )


@dataclass(frozen=True)
class Node:
    """A typed, statused graph element carrying the argument's content."""

    id: str
    node_type: str
    status: str
    label: str
    body: str | None = None

    def __post_init__(self) -> None:
        _check_id(self.id)


@dataclass(frozen=True)
class Edge:
    """A typed relation between two nodes; the optional body records why."""

    id: str
    edge_type: str
    source: str
    target: str
    body: str | None = None

    def __post_init__(self) -> None:
        _check_id(self.id)


@dataclass(frozen=True)
class BlueprintDocument:
    """One self-describing blueprint: nodes, edges, vocabulary, revision.

    Nodes and edges are kept sorted by id, so field equality coincides
    with canonical-bytes equality and serialization never reorders.
    """

    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()
    title: str | None = None
    vocabulary: Mapping[str, Any] | None = None
    revision: int = 0
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {self.schema_version!r}")
        if isinstance(self.revision, bool) or not isinstance(self.revision, int) or self.revision < 0:
            raise ValueError(f"revision must be a non-negative integer, got {self.revision!r}")
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.id)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))
        seen: set[str] = set()
        for element_id in [n.id for n in self.nodes] + [e.id for e in self.edges]:
            if element_id in seen:
                raise DuplicateId(f"duplicate id {element_id!r}")
            seen.add(element_id)

    @cached_property
    def _nodes_by_id(self) -> dict[str, Node]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def _edges_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    def node(self, node_id: str) -> Node | None:
        return self._nodes_by_id.get(node_id)

    def edge(self, edge_id: str) -> Edge | None:
        return self._edges_by_id.get(edge_id)

    def has_id(self, element_id: str) -> bool:
        return element_id in self._nodes_by_id or element_id in self._edges_by_id


@dataclass(frozen=True)
class Subgraph:
    """A document slice: some nodes plus edges induced among them."""

    nodes: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda n: n.id)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: e.id)))


# --- parse / serialize ---------------------------------------------------

_DOC_KEYS = ("schema_version", "title", "vocabulary", "revision", "nodes", "edges")
_NODE_KEYS = ("id", "type", "status", "label", "body")
_EDGE_KEYS = ("id", "type", "source", "target", "body")


def _expect_str(obj: Mapping[str, Any], key: str, where: str) -> str:
    if key not in obj:
        raise ParseError(f"missing required field {key!r}", where)
    value = obj[key]
    if not isinstance(value, str):
        raise ParseError(f"field {key!r} must be a string, got {value!r}", where)
    return value


def _expect_opt_str(obj: Mapping[str, Any], key: str, where: str) -> str | None:
    value = obj.get(key)
    if value is not None and not isinstance(value, str):
        raise ParseError(f"field {key!r} must be a string or null, got {value!r}", where)
    return value


def _expect_id(obj: Mapping[str, Any], where: str) -> str:
    value = _expect_str(obj, "id", where)
    if not _ID_RE.match(value):
        raise ParseError(
            f"id {value!r} is invalid: ids match [a-z0-9][a-z0-9-]*", where
        )
    return value


def _node_from_json(obj: Any, where: str) -> Node:
    if not isinstance(obj, dict):
        raise ParseError(f"node must be an object, got {obj!r}", where)
    unknown = set(obj) - set(_NODE_KEYS)
    if unknown:
        raise ParseError(f"unexpected node fields {sorted(unknown)}", where)
    return Node(
        id=_expect_id(obj, where),
        node_type=_expect_str(obj, "type", where),
        status=_expect_str(obj, "status", where),
        label=_expect_str(obj, "label", where),
        body=_expect_opt_str(obj, "body", where),
    )


def _edge_from_json(obj: Any, where: str) -> Edge:
    if not isinstance(obj, dict):
        raise ParseError(f"edge must be an object, got {obj!r}", where)
    unknown = set(obj) - set(_EDGE_KEYS)
    if unknown:
        raise ParseError(f"unexpected edge fields {sorted(unknown)}", where)
    return Edge(
        id=_expect_id(obj, where),
        edge_type=_expect_str(obj, "type", where),
        source=_expect_str(obj, "source", where),
        target=_expect_str(obj, "target", where),
        body=_expect_opt_str(obj, "body", where),
    )


def parse_document(text: str | bytes) -> BlueprintDocument:
    """Parse full file contents into a document.

    Raises ParseError (with location info) on malformed JSON, missing or
    mistyped required fields, duplicate ids, or an unsupported
    schema_version. Unknown type/status strings parse fine; lint flags
    them later.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc.reason}", f"byte {exc.start}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}"
        ) from exc
    if not isinstance(raw, dict):
        raise ParseError("document must be a JSON object", "$")
    unknown = set(raw) - set(_DOC_KEYS)
    if unknown:
        raise ParseError(f"unexpected document fields {sorted(unknown)}", "$")

    version = _expect_str(raw, "schema_version", "$")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}", "$")
    title = _expect_opt_str(raw, "title", "$")
    vocabulary = raw.get("vocabulary")
    if vocabulary is not None and not isinstance(vocabulary, dict):
        raise ParseError("field 'vocabulary' must be an object or null", "$")
    revision = raw.get("revision", 0)
    if isinstance(revision, bool) or not isinstance(revision, int) or revision < 0:
        raise ParseError(f"field 'revision' must be a non-negative integer, got {revision!r}", "$")

    for required in ("nodes", "edges"):
        if required not in raw:
            raise ParseError(f"missing required field {required!r}", "$")
        if not isinstance(raw[required], list):
            raise ParseError(f"field {required!r} must be a list", "$")

    nodes = [_node_from_json(obj, f"nodes[{i}]") for i, obj in enumerate(raw["nodes"])]
    edges = [_edge_from_json(obj, f"edges[{i}]") for i, obj in enumerate(raw["edges"])]

    seen: dict[str, str] = {}
    for element_id, where in [(n.id, f"nodes[{i}]") for i, n in enumerate(nodes)] + [
        (e.id, f"edges[{i}]") for i, e in enumerate(edges)
    ]:
        if element_id in seen:
            raise ParseError(f"duplicate id {element_id!r} (also used at {seen[element_id]})", where)
        seen[element_id] = where

    return BlueprintDocument(
        nodes=tuple(nodes),
        edges=tuple(edges),
        title=title,
        vocabulary=vocabulary,
        revision=revision,
    )


def _sorted_json(value: Any) -> Any:
    """Recursively sort mapping keys so equal values dump to equal bytes."""
    if isinstance(value, dict):
        return {k: _sorted_json(value[k]) for k in sorted(value)}
    if isinstance(value, list):
        return [_sorted_json(v) for v in value]
    return value


def _node_to_json(node: Node) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": node.id,
        "type": node.node_type,
        "status": node.status,
        "label": node.label,
    }
    if node.body is not None:
        out["body"] = node.body
    return out


def _edge_to_json(edge: Edge) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": edge.id,
        "type": edge.edge_type,
        "source": edge.source,
        "target": edge.target,
    }
    if edge.body is not None:
        out["body"] = edge.body
    return out


def document_to_json(doc: BlueprintDocument) -> dict[str, Any]:
    """The document as a JSON-ready mapping in canonical key order."""
    payload: dict[str, Any] = {"schema_version": doc.schema_version}
    if doc.title is not None:
        payload["title"] = doc.title
    if doc.vocabulary is not None:
        payload["vocabulary"] = _sorted_json(doc.vocabulary)
    payload["revision"] = doc.revision
    payload["nodes"] = [_node_to_json(n) for n in doc.nodes]
    payload["edges"] = [_edge_to_json(e) for e in doc.edges]
    return payload


def subgraph_to_json(subgraph: Subgraph) -> dict[str, Any]:
    return {
        "nodes": [_node_to_json(n) for n in subgraph.nodes],
        "edges": [_edge_to_json(e) for e in subgraph.edges],
    }


def serialize_document(doc: BlueprintDocument) -> str:
    """Render the canonical form: fixed key order, id-sorted elements,
    two-space indent, trailing newline. parse(serialize(d)) == d."""
    return json.dumps(document_to_json(doc), indent=2, ensure_ascii=False) + "\n"


# --- mutations ------------------------------------------------------------

def _auto_id(doc: BlueprintDocument, type_name: str, fallback: str) -> str:
    stem = re.sub(r"[^a-z0-9-]+", "-", type_name.lower()).strip("-") or fallback
    n = 1
    while doc.has_id(f"{stem}-{n}"):
        n += 1
    return f"{stem}-{n}"


def _check_new_id(doc: BlueprintDocument, element_id: str) -> None:
    _check_id(element_id)
    if doc.has_id(element_id):
        raise DuplicateId(f"id {element_id!r} already exists")


def add_node(
    doc: BlueprintDocument,
    node_type: str,
    label: str,
    body: str | None = None,
    node_id: str | None = None,
    registry: VocabularyRegistry | None = None,
) -> tuple[BlueprintDocument, str]:
    """Add a node with the type's first-rung status ("draft" for unknown
    types). Auto-ids take the smallest unused ``<type>-<n>``."""
    if registry is None:
        registry = resolve_vocabulary(doc.vocabulary)
    if node_id is None:
        node_id = _auto_id(doc, node_type, "node")
    else:
        _check_new_id(doc, node_id)
    node = Node(
        id=node_id,
        node_type=node_type,
        status=registry.default_status(node_type),
        label=label,
        body=body,
    )
    return replace(doc, nodes=doc.nodes + (node,)), node_id


def add_edge(
    doc: BlueprintDocument,
    edge_type: str,
    source: str,
    target: str,
    body: str | None = None,
    edge_id: str | None = None,
) -> tuple[BlueprintDocument, str]:
    """Add an edge between existing nodes. Endpoint-constraint violations
    are not rejected here; lint flags them."""
    for endpoint in (source, target):
        if doc.node(endpoint) is None:
            raise UnknownEndpoint(f"no node with id {endpoint!r}")
    if edge_id is None:
        edge_id = _auto_id(doc, edge_type, "edge")
    else:
        _check_new_id(doc, edge_id)
    edge = Edge(id=edge_id, edge_type=edge_type, source=source, target=target, body=body)
    return replace(doc, edges=doc.edges + (edge,)), edge_id


def _replace_node(doc: BlueprintDocument, node: Node) -> BlueprintDocument:
    return replace(doc, nodes=tuple(node if n.id == node.id else n for n in doc.nodes))


def set_status(doc: BlueprintDocument, node_id: str, status: str) -> BlueprintDocument:
    """Set a node's status to any string; ladders do not constrain moves
    (backward and out-of-ladder values are stored, lint flags the latter)."""
    node = doc.node(node_id)
    if node is None:
        raise UnknownNode(f"no node with id {node_id!r}")
    return _replace_node(doc, replace(node, status=status))


def set_label(doc: BlueprintDocument, node_id: str, label: str) -> BlueprintDocument:
    """Set a node's label; empty labels are stored and flagged by lint."""
    node = doc.node(node_id)
    if node is None:
        detail = " (labels apply to nodes only)" if doc.edge(node_id) is not None else ""
        raise UnknownNode(f"no node with id {node_id!r}{detail}")
    return _replace_node(doc, replace(node, label=label))


def set_body(doc: BlueprintDocument, element_id: str, body: str | None) -> BlueprintDocument:
    """Set or clear the Markdown body of a node or an edge."""
    node = doc.node(element_id)
    if node is not None:
        return _replace_node(doc, replace(node, body=body))
    edge = doc.edge(element_id)
    if edge is not None:
        new_edge = replace(edge, body=body)
        return replace(doc, edges=tuple(new_edge if e.id == element_id else e for e in doc.edges))
    raise UnknownElement(f"no node or edge with id {element_id!r}")


def remove_node(doc: BlueprintDocument, node_id: str) -> BlueprintDocument:
    """Remove a node and every edge incident to it."""
    if doc.node(node_id) is None:
        raise UnknownNode(f"no node with id {node_id!r}")
    return replace(
        doc,
        nodes=tuple(n for n in doc.nodes if n.id != node_id),
        edges=tuple(e for e in doc.edges if node_id not in (e.source, e.target)),
    )


def remove_edge(doc: BlueprintDocument, edge_id: str) -> BlueprintDocument:
    """Remove an edge; its endpoint nodes are untouched."""
    if doc.edge(edge_id) is None:
        raise UnknownElement(f"no edge with id {edge_id!r}")
    return replace(doc, edges=tuple(e for e in doc.edges if e.id != edge_id))


# --- queries ----------------------------------------------------------------

def _filtered_edges(doc: BlueprintDocument, edge_filter: Iterable[str] | None) -> list[Edge]:
    if edge_filter is None:
        return list(doc.edges)
    allowed = set(edge_filter)
    return [e for e in doc.edges if e.edge_type in allowed]


def neighborhood(
    doc: BlueprintDocument,
    node_id: str,
    depth: int | None = 1,
    edge_filter: Iterable[str] | None = None,
) -> Subgraph:
    """Nodes within ``depth`` undirected hops along edges passing the
    filter, plus the passing edges induced among them. ``depth=None``
    means unbounded (the whole connected component)."""
    if doc.node(node_id) is None:
        raise UnknownNode(f"no node with id {node_id!r}")
    if depth is not None and (isinstance(depth, bool) or not isinstance(depth, int) or depth < 1):
        raise ValueError(f"depth must be a positive integer or None, got {depth!r}")

    edges = _filtered_edges(doc, edge_filter)
    adjacency: dict[str, set[str]] = {}
    for e in edges:
        if doc.node(e.source) is None or doc.node(e.target) is None:
            continue  # dangling endpoints cannot be traversed
        adjacency.setdefault(e.source, set()).add(e.target)
        adjacency.setdefault(e.target, set()).add(e.source)

    visited = {node_id}
    frontier = deque([(node_id, 0)])
    while frontier:
        current, dist = frontier.popleft()
        if depth is not None and dist >= depth:
            continue
        for neighbor in sorted(adjacency.get(current, ())):
            if neighbor not in visited:
                visited.add(neighbor)
                frontier.append((neighbor, dist + 1))

    nodes = tuple(n for n in doc.nodes if n.id in visited)
    induced = tuple(e for e in edges if e.source in visited and e.target in visited)
    return Subgraph(nodes=nodes, edges=induced)


def supports_subgraph(doc: BlueprintDocument) -> Subgraph:
    """All nodes, only the edges named "supports" in the active registry."""
    return Subgraph(
        nodes=doc.nodes,
        edges=tuple(e for e in doc.edges if e.edge_type == SUPPORTS),
    )


def is_matured(node: Node, registry: VocabularyRegistry) -> bool:
    """True iff the node's status is in its type's matured set; unknown
    types or statuses fail closed."""
    spec = registry.node_spec(node.node_type)
    return spec is not None and node.status in spec.matured


def _tarjan_sccs(node_ids: list[str], adjacency: Mapping[str, list[str]]) -> list[list[str]]:
    """Strongly connected components, iteratively (no recursion limit)."""
    index: dict[str, int] = {}
    lowlink: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    sccs: list[list[str]] = []
    counter = 0

    for root in node_ids:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            v, next_child = work[-1]
            if next_child == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            descended = False
            successors = adjacency.get(v, [])
            for i in range(next_child, len(successors)):
                w = successors[i]
                if w not in index:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    descended = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == v:
                        break
                sccs.append(scc)
    return sccs


def _representative_cycle(scc: list[str], adjacency: Mapping[str, list[str]]) -> list[str]:
    """Shortest cycle through the SCC's smallest node id (BFS, deterministic)."""
    start = min(scc)
    members = set(scc)
    if start in adjacency.get(start, ()):
        return [start]
    parent: dict[str, str | None] = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adjacency.get(u, ()):
            if w == start and u != start:
                path = [u]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])  # type: ignore[arg-type]
                return list(reversed(path))
            if w in members and w not in parent:
                parent[w] = u
                queue.append(w)
    raise AssertionError(f"no cycle found in cyclic SCC {scc!r}")


def find_cycles(subgraph: Subgraph) -> list[list[str]]:
    """One representative cycle per cyclic SCC (size >= 2 or a self-loop),
    each rotated to start at its lexicographically smallest node id.
    Empty exactly when the directed subgraph is acyclic."""
    node_ids = sorted(n.id for n in subgraph.nodes)
    present = set(node_ids)
    adjacency: dict[str, list[str]] = {}
    for e in subgraph.edges:
        if e.source in present and e.target in present:
            adjacency.setdefault(e.source, []).append(e.target)
    for targets in adjacency.values():
        targets.sort()

    cycles = []
    for scc in _tarjan_sccs(node_ids, adjacency):
        if len(scc) >= 2 or scc[0] in adjacency.get(scc[0], ()):
            cycles.append(_representative_cycle(scc, adjacency))
    cycles.sort(key=lambda c: c[0])
    return cycles


def stats(doc: BlueprintDocument, registry: VocabularyRegistry) -> dict[str, Any]:
    """Counts per node type and status, per edge type, and the lint
    warning total. Registry types appear even at zero."""
    from .lint import lint_document  # local import: lint builds on this module

    node_counts: dict[str, dict[str, int]] = {
        name: {status: 0 for status in spec.ladder}
        for name, spec in sorted(registry.node_types.items())
    }
    for n in doc.nodes:
        row = node_counts.setdefault(n.node_type, {})
        row[n.status] = row.get(n.status, 0) + 1
    edge_counts: dict[str, int] = {name: 0 for name in sorted(registry.edge_types)}
    for e in doc.edges:
        edge_counts[e.edge_type] = edge_counts.get(e.edge_type, 0) + 1
    return {
        "nodes": node_counts,
        "edges": edge_counts,
        "warnings": len(lint_document(doc, registry)),
    }


# --- mutation commands (wire format shared by server clients) ---------------

_OP_FIELDS: dict[str, tuple[set[str], set[str]]] = {
    "add_node": ({"node_type", "label"}, {"body", "id"}),
    "add_edge": ({"edge_type", "source", "target"}, {"body", "id"}),
    "set_status": ({"id", "status"}, set()),
    "set_label": ({"id", "label"}, set()),
    "set_body": ({"id", "body"}, set()),
    "remove_node": ({"id"}, set()),
    "remove_edge": ({"id"}, set()),
}

_NULLABLE_FIELDS = {"body"}


@dataclass(frozen=True)
class MutationCommand:
    """One atomic edit, as carried in a mutation request."""

    op: str
    args: Mapping[str, Any] = field(default_factory=dict)


def command_from_json(obj: Any) -> MutationCommand:
    """Validate a wire-format command object; raises InvalidCommand."""
    if not isinstance(obj, dict):
        raise InvalidCommand(f"command must be an object, got {obj!r}")
    op = obj.get("op")
    if op not in _OP_FIELDS:
        raise InvalidCommand(f"unknown op {op!r}; expected one of {sorted(_OP_FIELDS)}")
    required, optional = _OP_FIELDS[op]
    keys = set(obj) - {"op"}
    missing = required - keys
    if missing:
        raise InvalidCommand(f"{op}: missing fields {sorted(missing)}")
    extra = keys - required - optional
    if extra:
        raise InvalidCommand(f"{op}: unexpected fields {sorted(extra)}")
    args = {k: obj[k] for k in keys}
    for key, value in args.items():
        if value is None and key in _NULLABLE_FIELDS:
            continue
        if not isinstance(value, str):
            raise InvalidCommand(f"{op}: field {key!r} must be a string, got {value!r}")
    return MutationCommand(op=op, args=args)


def apply_command(
    doc: BlueprintDocument,
    command: MutationCommand,
    registry: VocabularyRegistry | None = None,
) -> tuple[BlueprintDocument, str]:
    """Apply one command; returns the new document and the affected id."""
    op, args = command.op, command.args
    if op == "add_node":
        return add_node(
            doc,
            args["node_type"],
            args["label"],
            body=args.get("body"),
            node_id=args.get("id"),
            registry=registry,
        )
    if op == "add_edge":
        return add_edge(
            doc,
            args["edge_type"],
            args["source"],
            args["target"],
            body=args.get("body"),
            edge_id=args.get("id"),
        )
    if op == "set_status":
        return set_status(doc, args["id"], args["status"]), args["id"]
    if op == "set_label":
        return set_label(doc, args["id"], args["label"]), args["id"]
    if op == "set_body":
        return set_body(doc, args["id"], args["body"]), args["id"]
    if op == "remove_node":
        return remove_node(doc, args["id"]), args["id"]
    if op == "remove_edge":
        return remove_edge(doc, args["id"]), args["id"]
    raise InvalidCommand(f"unknown op {op!r}")


def apply_commands(
    doc: BlueprintDocument,
    commands: Iterable[MutationCommand],
    registry: VocabularyRegistry | None = None,
) -> tuple[BlueprintDocument, list[str]]:
    """Apply commands in order; any failure propagates with the original
    document untouched (documents are immutable, so all-or-nothing is free)."""
    affected = []
    for command in commands:
        doc, element_id = apply_command(doc, command, registry)
        affected.append(element_id)
    return doc, affected
