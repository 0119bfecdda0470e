"""Shorthand constructors shared by the test modules."""

from __future__ import annotations

from blueprint import BlueprintDocument, Edge, Node


def N(node_id: str, node_type: str, status: str, label: str = "x", body: str | None = None) -> Node:
    return Node(id=node_id, node_type=node_type, status=status, label=label, body=body)


def E(edge_id: str, edge_type: str, source: str, target: str, body: str | None = None) -> Edge:
    return Edge(id=edge_id, edge_type=edge_type, source=source, target=target, body=body)


def make_doc(nodes=(), edges=(), **kwargs) -> BlueprintDocument:
    return BlueprintDocument(nodes=tuple(nodes), edges=tuple(edges), **kwargs)
