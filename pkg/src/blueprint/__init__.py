"""Blueprints: typed, statused argument graphs stored as single JSON files.

A blueprint records a project's claims, evidence, assumptions, and their
support structure so the argument can be inspected locally instead of
reconstructed from prose. The package ships the document model, a
structural lint catalog, an agent-facing CLI, and a workspace sync
server that keeps a browser canvas and CLI edits converged.
"""

from .lint import (
    ALL_RULES,
    Diagnostic,
    diagnostics_to_json,
    lint_document,
    lint_subgraph,
)
from .model import (
    BLUEPRINT_SUFFIX,
    BlueprintDocument,
    BlueprintError,
    DocumentError,
    DuplicateId,
    Edge,
    InvalidCommand,
    InvalidId,
    MutationCommand,
    Node,
    ParseError,
    Subgraph,
    UnknownElement,
    UnknownEndpoint,
    UnknownNode,
    add_edge,
    add_node,
    apply_command,
    apply_commands,
    command_from_json,
    document_to_json,
    find_cycles,
    is_matured,
    neighborhood,
    parse_document,
    remove_edge,
    remove_node,
    serialize_document,
    set_body,
    set_label,
    set_status,
    stats,
    subgraph_to_json,
    supports_subgraph,
)
from .vocabulary import (
    BUILTIN_EDGE_TYPES,
    BUILTIN_NODE_TYPES,
    ConfigError,
    EdgeTypeSpec,
    NodeTypeSpec,
    Role,
    VocabularyRegistry,
    resolve_vocabulary,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_RULES",
    "BLUEPRINT_SUFFIX",
    "BUILTIN_EDGE_TYPES",
    "BUILTIN_NODE_TYPES",
    "BlueprintDocument",
    "BlueprintError",
    "ConfigError",
    "Diagnostic",
    "DocumentError",
    "DuplicateId",
    "Edge",
    "EdgeTypeSpec",
    "InvalidCommand",
    "InvalidId",
    "MutationCommand",
    "Node",
    "NodeTypeSpec",
    "ParseError",
    "Role",
    "Subgraph",
    "UnknownElement",
    "UnknownEndpoint",
    "UnknownNode",
    "VocabularyRegistry",
    "add_edge",
    "add_node",
    "apply_command",
    "apply_commands",
    "command_from_json",
    "diagnostics_to_json",
    "document_to_json",
    "find_cycles",
    "is_matured",
    "lint_document",
    "lint_subgraph",
    "neighborhood",
    "parse_document",
    "remove_edge",
    "remove_node",
    "resolve_vocabulary",
    "serialize_document",
    "set_body",
    "set_label",
    "set_status",
    "stats",
    "subgraph_to_json",
    "supports_subgraph",
]
