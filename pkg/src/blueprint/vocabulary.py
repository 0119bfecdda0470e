"""Node/edge type vocabulary and its three-level resolution.

The built-in vocabulary ships seven node types (grouped into four roles)
and five edge types. A workspace may override entries via a
``blueprint.config.json`` file, and a document may override entries via
its embedded ``vocabulary`` field. Resolution layers document over
workspace over built-in; a layer replaces entries wholesale by name,
never merging fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping


class ConfigError(Exception):
    """A vocabulary override entry is structurally invalid."""


class Role(str, Enum):
    """What part a node type plays in the argument graph."""

    ARGUMENT_CORE = "argument-core"
    CONSTRUCTION_HANDLE = "construction-handle"
    REVIEW_CHANNEL = "review-channel"
    FLEXIBILITY_VALVE = "flexibility-valve"


PROVENANCE_BUILTIN = "built-in"
PROVENANCE_WORKSPACE = "workspace"
PROVENANCE_DOCUMENT = "document"


@dataclass(frozen=True)
class NodeTypeSpec:
    """A node type: its role, status ladder, and matured statuses.

    The first ladder rung is the default status for new nodes. A node
    counts as matured (grounded) when its status is in ``matured``.
    """

    name: str
    role: Role
    ladder: tuple[str, ...]
    matured: frozenset[str]

    def __post_init__(self) -> None:
        if not self.ladder:
            raise ConfigError(f"node type {self.name!r}: ladder must not be empty")
        if len(set(self.ladder)) != len(self.ladder):
            raise ConfigError(f"node type {self.name!r}: ladder entries must be unique")
        if not self.matured <= set(self.ladder):
            extra = sorted(self.matured - set(self.ladder))
            raise ConfigError(
                f"node type {self.name!r}: matured statuses {extra} are not in the ladder"
            )

    @property
    def default_status(self) -> str:
        return self.ladder[0]


@dataclass(frozen=True)
class EdgeTypeSpec:
    """An edge type with optional endpoint constraints.

    Empty ``sources``/``targets`` mean any node type is permitted.
    ``symmetric`` edges carry no direction for lint purposes.
    """

    name: str
    sources: frozenset[str] = frozenset()
    targets: frozenset[str] = frozenset()
    symmetric: bool = False

    def allows_source(self, node_type: str) -> bool:
        return not self.sources or node_type in self.sources

    def allows_target(self, node_type: str) -> bool:
        return not self.targets or node_type in self.targets


BUILTIN_NODE_TYPES: tuple[NodeTypeSpec, ...] = (
    NodeTypeSpec("claim", Role.ARGUMENT_CORE, ("draft", "stated", "supported"), frozenset({"supported"})),
    NodeTypeSpec("evidence", Role.ARGUMENT_CORE, ("missing", "cited", "verified"), frozenset({"cited", "verified"})),
    NodeTypeSpec("assumption", Role.ARGUMENT_CORE, ("given", "questioned"), frozenset({"given"})),
    NodeTypeSpec("definition", Role.CONSTRUCTION_HANDLE, ("draft", "stated"), frozenset({"stated"})),
    NodeTypeSpec("question", Role.CONSTRUCTION_HANDLE, ("open", "answered"), frozenset({"answered"})),
    NodeTypeSpec("risk", Role.REVIEW_CHANNEL, ("noted", "addressed", "accepted"), frozenset({"addressed", "accepted"})),
    NodeTypeSpec("synthesis", Role.FLEXIBILITY_VALVE, ("draft", "stated"), frozenset({"stated"})),
)

BUILTIN_EDGE_TYPES: tuple[EdgeTypeSpec, ...] = (
    EdgeTypeSpec(
        "supports",
        sources=frozenset({"claim", "evidence", "assumption", "synthesis"}),
        targets=frozenset({"claim", "synthesis"}),
    ),
    EdgeTypeSpec("expands"),
    EdgeTypeSpec("contradicts", symmetric=True),
    EdgeTypeSpec("addresses", targets=frozenset({"risk", "question"})),
    EdgeTypeSpec("relates", symmetric=True),
)

SUPPORTS = "supports"
ADDRESSES = "addresses"
CONTRADICTS = "contradicts"


@dataclass(frozen=True)
class VocabularyRegistry:
    """The resolved vocabulary: specs by name plus per-entry provenance."""

    node_types: Mapping[str, NodeTypeSpec]
    edge_types: Mapping[str, EdgeTypeSpec]
    node_provenance: Mapping[str, str] = field(default_factory=dict)
    edge_provenance: Mapping[str, str] = field(default_factory=dict)

    def node_spec(self, name: str) -> NodeTypeSpec | None:
        return self.node_types.get(name)

    def edge_spec(self, name: str) -> EdgeTypeSpec | None:
        return self.edge_types.get(name)

    def default_status(self, node_type: str) -> str:
        """First ladder rung for the type; "draft" when the type is unknown."""
        spec = self.node_types.get(node_type)
        return spec.default_status if spec is not None else "draft"

    def supports_target_types(self) -> frozenset[str]:
        """Node types permitted as targets of supports edges (empty = any)."""
        spec = self.edge_types.get(SUPPORTS)
        return spec.targets if spec is not None else frozenset()


def _require_str(value: Any, what: str) -> str:
    if not isinstance(value, str):
        raise ConfigError(f"{what} must be a string, got {value!r}")
    return value


def _str_list(value: Any, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ConfigError(f"{what} must be a list of strings, got {value!r}")
    return value


def node_type_from_config(entry: Any) -> NodeTypeSpec:
    """Build a NodeTypeSpec from an override entry.

    ``role`` defaults to argument-core; ``matured`` defaults to the last
    ladder rung.
    """
    if not isinstance(entry, dict):
        raise ConfigError(f"node type entry must be an object, got {entry!r}")
    unknown = set(entry) - {"name", "role", "ladder", "matured"}
    if unknown:
        raise ConfigError(f"node type entry has unknown keys {sorted(unknown)}")
    name = _require_str(entry.get("name"), "node type name")
    ladder = tuple(_str_list(entry.get("ladder"), f"node type {name!r}: ladder"))
    role_raw = entry.get("role", Role.ARGUMENT_CORE.value)
    try:
        role = Role(_require_str(role_raw, f"node type {name!r}: role"))
    except ValueError:
        raise ConfigError(
            f"node type {name!r}: role {role_raw!r} is not one of "
            f"{[r.value for r in Role]}"
        ) from None
    if "matured" in entry:
        matured = frozenset(_str_list(entry["matured"], f"node type {name!r}: matured"))
    elif ladder:
        matured = frozenset({ladder[-1]})
    else:
        matured = frozenset()
    return NodeTypeSpec(name=name, role=role, ladder=ladder, matured=matured)


def edge_type_from_config(entry: Any) -> EdgeTypeSpec:
    """Build an EdgeTypeSpec from an override entry."""
    if not isinstance(entry, dict):
        raise ConfigError(f"edge type entry must be an object, got {entry!r}")
    unknown = set(entry) - {"name", "sources", "targets", "symmetric"}
    if unknown:
        raise ConfigError(f"edge type entry has unknown keys {sorted(unknown)}")
    name = _require_str(entry.get("name"), "edge type name")
    sources = frozenset(_str_list(entry.get("sources", []), f"edge type {name!r}: sources"))
    targets = frozenset(_str_list(entry.get("targets", []), f"edge type {name!r}: targets"))
    symmetric = entry.get("symmetric", False)
    if not isinstance(symmetric, bool):
        raise ConfigError(f"edge type {name!r}: symmetric must be a boolean")
    return EdgeTypeSpec(name=name, sources=sources, targets=targets, symmetric=symmetric)


def _layer_entries(override: Any, layer: str) -> tuple[list[NodeTypeSpec], list[EdgeTypeSpec]]:
    if override is None:
        return [], []
    if not isinstance(override, dict):
        raise ConfigError(f"{layer} vocabulary override must be an object")
    unknown = set(override) - {"node_types", "edge_types"}
    if unknown:
        raise ConfigError(f"{layer} vocabulary override has unknown keys {sorted(unknown)}")
    raw_nodes = override.get("node_types", [])
    raw_edges = override.get("edge_types", [])
    if not isinstance(raw_nodes, list) or not isinstance(raw_edges, list):
        raise ConfigError(f"{layer} vocabulary override: node_types/edge_types must be lists")
    nodes = [node_type_from_config(e) for e in raw_nodes]
    edges = [edge_type_from_config(e) for e in raw_edges]
    for specs, kind in ((nodes, "node"), (edges, "edge")):
        names = [s.name for s in specs]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ConfigError(f"{layer} vocabulary override: duplicate {kind} types {dupes}")
    return nodes, edges


def resolve_vocabulary(
    document_override: Mapping[str, Any] | None = None,
    workspace_override: Mapping[str, Any] | None = None,
) -> VocabularyRegistry:
    """Resolve the active registry: document over workspace over built-in.

    Each override layer replaces same-named entries wholesale. Raises
    ConfigError when an override entry is structurally invalid.
    """
    node_types: dict[str, NodeTypeSpec] = {s.name: s for s in BUILTIN_NODE_TYPES}
    edge_types: dict[str, EdgeTypeSpec] = {s.name: s for s in BUILTIN_EDGE_TYPES}
    node_prov = {name: PROVENANCE_BUILTIN for name in node_types}
    edge_prov = {name: PROVENANCE_BUILTIN for name in edge_types}

    layers: Iterable[tuple[Any, str]] = (
        (workspace_override, PROVENANCE_WORKSPACE),
        (document_override, PROVENANCE_DOCUMENT),
    )
    for override, provenance in layers:
        nodes, edges = _layer_entries(override, provenance)
        for spec in nodes:
            node_types[spec.name] = spec
            node_prov[spec.name] = provenance
        for espec in edges:
            edge_types[espec.name] = espec
            edge_prov[espec.name] = provenance

    return VocabularyRegistry(
        node_types=node_types,
        edge_types=edge_types,
        node_provenance=node_prov,
        edge_provenance=edge_prov,
    )
