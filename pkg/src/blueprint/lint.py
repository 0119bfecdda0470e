"""Structural lint: advisory diagnostics over a resolved document.

The catalog covers three axes: soundness of the support graph, argument
structure, and vocabulary integrity. Every rule is a warning, never a
block; linting is total over any parseable document and never mutates
it. Output is deterministic, ordered by rule code then subject id.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .model import (
    BlueprintDocument,
    Edge,
    Node,
    UnknownNode,
    find_cycles,
    is_matured,
    supports_subgraph,
)
from .vocabulary import ADDRESSES, CONTRADICTS, SUPPORTS, Role, VocabularyRegistry

SEVERITY_WARNING = "warning"
SEVERITY_ERROR = "error"  # reserved for parse-level findings, not catalog rules

# Axis 1: soundness of the support graph
SUPPORTS_WRONG_DIRECTION = "SUPPORTS_WRONG_DIRECTION"
UNGROUNDED_SUPPORTER = "UNGROUNDED_SUPPORTER"
SUPPORTED_NO_INCOMING = "SUPPORTED_NO_INCOMING"
EVIDENCE_CONTENT_MISSING = "EVIDENCE_CONTENT_MISSING"
# Axis 2: argument structure
SUPPORT_CYCLE = "SUPPORT_CYCLE"
SYNTHESIS_SINGLE_SUPPORTER = "SYNTHESIS_SINGLE_SUPPORTER"
SYNTHESIS_EMPTY = "SYNTHESIS_EMPTY"
SYNTHESIS_DANGLING = "SYNTHESIS_DANGLING"
RISK_OPEN_ON_MATURED = "RISK_OPEN_ON_MATURED"
ADDRESSES_WRONG_TARGET = "ADDRESSES_WRONG_TARGET"
SELF_LOOP = "SELF_LOOP"
# Axis 3: vocabulary integrity
UNKNOWN_TYPE_OR_STATUS = "UNKNOWN_TYPE_OR_STATUS"
EMPTY_LABEL = "EMPTY_LABEL"
DANGLING_ENDPOINT = "DANGLING_ENDPOINT"

ALL_RULES: tuple[str, ...] = (
    SUPPORTS_WRONG_DIRECTION,
    UNGROUNDED_SUPPORTER,
    SUPPORTED_NO_INCOMING,
    EVIDENCE_CONTENT_MISSING,
    SUPPORT_CYCLE,
    SYNTHESIS_SINGLE_SUPPORTER,
    SYNTHESIS_EMPTY,
    SYNTHESIS_DANGLING,
    RISK_OPEN_ON_MATURED,
    ADDRESSES_WRONG_TARGET,
    SELF_LOOP,
    UNKNOWN_TYPE_OR_STATUS,
    EMPTY_LABEL,
    DANGLING_ENDPOINT,
)


@dataclass(frozen=True)
class Diagnostic:
    """One lint finding; always advisory."""

    rule: str
    subject: str
    message: str
    severity: str = SEVERITY_WARNING

    def to_json(self) -> dict[str, str]:
        return {"rule": self.rule, "subject": self.subject, "message": self.message}


def diagnostics_to_json(diagnostics: Iterable[Diagnostic]) -> list[dict[str, str]]:
    return [d.to_json() for d in diagnostics]


def _empty(text: str | None) -> bool:
    return text is None or not text.strip()


def _supports_edges(doc: BlueprintDocument) -> list[Edge]:
    return [e for e in doc.edges if e.edge_type == SUPPORTS]


def _incoming_supports(doc: BlueprintDocument) -> dict[str, int]:
    counts: dict[str, int] = {}
    for e in _supports_edges(doc):
        counts[e.target] = counts.get(e.target, 0) + 1
    return counts


def _outgoing_supports(doc: BlueprintDocument) -> dict[str, int]:
    counts: dict[str, int] = {}
    for e in _supports_edges(doc):
        counts[e.source] = counts.get(e.source, 0) + 1
    return counts


def _valve_nodes(doc: BlueprintDocument, registry: VocabularyRegistry) -> Iterator[Node]:
    for n in doc.nodes:
        spec = registry.node_spec(n.node_type)
        if spec is not None and spec.role is Role.FLEXIBILITY_VALVE:
            yield n


def _check_supports_wrong_direction(doc, registry) -> Iterator[Diagnostic]:
    spec = registry.edge_spec(SUPPORTS)
    if spec is None:
        return
    for e in _supports_edges(doc):
        source, target = doc.node(e.source), doc.node(e.target)
        problems = []
        if source is not None and not spec.allows_source(source.node_type):
            problems.append(f"{source.node_type!r} cannot be a supports source")
        if target is not None and not spec.allows_target(target.node_type):
            problems.append(f"{target.node_type!r} cannot be a supports target")
        if problems:
            yield Diagnostic(
                SUPPORTS_WRONG_DIRECTION,
                e.id,
                f"supports edge {e.id} ({e.source} -> {e.target}): " + "; ".join(problems),
            )


def _check_ungrounded_supporter(doc, registry) -> Iterator[Diagnostic]:
    for e in _supports_edges(doc):
        source, target = doc.node(e.source), doc.node(e.target)
        if source is None or target is None:
            continue
        if is_matured(target, registry) and not is_matured(source, registry):
            yield Diagnostic(
                UNGROUNDED_SUPPORTER,
                e.id,
                f"supports edge {e.id}: target {target.id} is matured ({target.status}) "
                f"but source {source.id} is not ({source.status})",
            )


def _check_supported_no_incoming(doc, registry) -> Iterator[Diagnostic]:
    if registry.edge_spec(SUPPORTS) is None:
        return
    target_types = registry.supports_target_types()
    incoming = _incoming_supports(doc)
    for n in doc.nodes:
        if target_types and n.node_type not in target_types:
            continue
        if is_matured(n, registry) and incoming.get(n.id, 0) == 0:
            yield Diagnostic(
                SUPPORTED_NO_INCOMING,
                n.id,
                f"node {n.id} has matured status {n.status!r} but no incoming supports edges; "
                "structurally it is an assumption",
            )


def _check_evidence_content_missing(doc, registry) -> Iterator[Diagnostic]:
    spec = registry.node_spec("evidence")
    if spec is None:
        return
    for n in doc.nodes:
        if n.node_type != "evidence" or n.status not in spec.ladder:
            continue
        if spec.ladder.index(n.status) >= 1 and _empty(n.body):
            yield Diagnostic(
                EVIDENCE_CONTENT_MISSING,
                n.id,
                f"evidence {n.id} has status {n.status!r} but an empty body",
            )


def _check_support_cycle(doc, registry) -> Iterator[Diagnostic]:
    for cycle in find_cycles(supports_subgraph(doc)):
        path = " -> ".join(cycle + [cycle[0]])
        yield Diagnostic(SUPPORT_CYCLE, cycle[0], f"circular support: {path}")


def _check_synthesis_single_supporter(doc, registry) -> Iterator[Diagnostic]:
    incoming = _incoming_supports(doc)
    for n in _valve_nodes(doc, registry):
        count = incoming.get(n.id, 0)
        if count < 2:
            yield Diagnostic(
                SYNTHESIS_SINGLE_SUPPORTER,
                n.id,
                f"synthesis {n.id} has {count} incoming supports edge(s); "
                "joint support needs at least two",
            )


def _check_synthesis_empty(doc, registry) -> Iterator[Diagnostic]:
    for n in _valve_nodes(doc, registry):
        if _empty(n.body):
            yield Diagnostic(
                SYNTHESIS_EMPTY, n.id, f"synthesis {n.id} has an empty body"
            )


def _check_synthesis_dangling(doc, registry) -> Iterator[Diagnostic]:
    outgoing = _outgoing_supports(doc)
    for n in _valve_nodes(doc, registry):
        if outgoing.get(n.id, 0) == 0:
            yield Diagnostic(
                SYNTHESIS_DANGLING,
                n.id,
                f"synthesis {n.id} has no outgoing supports edge; "
                "a joint argument must conclude somewhere",
            )


def _check_risk_open_on_matured(doc, registry) -> Iterator[Diagnostic]:
    # contradicts is symmetric, so the risk may sit at either end; one
    # finding per (risk, matured node) pair regardless of edge count.
    pairs: set[tuple[str, str]] = set()
    for e in doc.edges:
        if e.edge_type != CONTRADICTS:
            continue
        source, target = doc.node(e.source), doc.node(e.target)
        if source is None or target is None:
            continue
        for risk, other in ((source, target), (target, source)):
            spec = registry.node_spec(risk.node_type)
            if spec is None or spec.role is not Role.REVIEW_CHANNEL:
                continue
            if risk.status == spec.ladder[0] and is_matured(other, registry):
                pairs.add((risk.id, other.id))
    for risk_id, other_id in sorted(pairs):
        other = doc.node(other_id)
        yield Diagnostic(
            RISK_OPEN_ON_MATURED,
            other_id,
            f"node {other_id} has matured status {other.status!r} "
            f"while risk {risk_id} is unresolved",
        )


def _check_addresses_wrong_target(doc, registry) -> Iterator[Diagnostic]:
    spec = registry.edge_spec(ADDRESSES)
    if spec is None:
        return
    for e in doc.edges:
        if e.edge_type != ADDRESSES:
            continue
        target = doc.node(e.target)
        if target is not None and not spec.allows_target(target.node_type):
            yield Diagnostic(
                ADDRESSES_WRONG_TARGET,
                e.id,
                f"addresses edge {e.id} targets {target.id} ({target.node_type}), "
                "which is not an addressable type",
            )


def _check_self_loop(doc, registry) -> Iterator[Diagnostic]:
    for e in doc.edges:
        if e.source == e.target:
            yield Diagnostic(
                SELF_LOOP, e.id, f"edge {e.id} is a self-loop on {e.source}"
            )


def _check_unknown_type_or_status(doc, registry) -> Iterator[Diagnostic]:
    for n in doc.nodes:
        spec = registry.node_spec(n.node_type)
        if spec is None:
            yield Diagnostic(
                UNKNOWN_TYPE_OR_STATUS,
                n.id,
                f"node {n.id} has type {n.node_type!r} not in the active registry",
            )
        elif n.status not in spec.ladder:
            yield Diagnostic(
                UNKNOWN_TYPE_OR_STATUS,
                n.id,
                f"node {n.id} has status {n.status!r} not in the {n.node_type!r} ladder",
            )
    for e in doc.edges:
        if registry.edge_spec(e.edge_type) is None:
            yield Diagnostic(
                UNKNOWN_TYPE_OR_STATUS,
                e.id,
                f"edge {e.id} has type {e.edge_type!r} not in the active registry",
            )


def _check_empty_label(doc, registry) -> Iterator[Diagnostic]:
    for n in doc.nodes:
        if _empty(n.label):
            yield Diagnostic(EMPTY_LABEL, n.id, f"node {n.id} has an empty label")


def _check_dangling_endpoint(doc, registry) -> Iterator[Diagnostic]:
    for e in doc.edges:
        missing = sorted(
            {ep for ep in (e.source, e.target) if doc.node(ep) is None}
        )
        if missing:
            named = ", ".join(repr(m) for m in missing)
            yield Diagnostic(
                DANGLING_ENDPOINT,
                e.id,
                f"edge {e.id} references missing node(s) {named}",
            )


_CATALOG = (
    _check_supports_wrong_direction,
    _check_ungrounded_supporter,
    _check_supported_no_incoming,
    _check_evidence_content_missing,
    _check_support_cycle,
    _check_synthesis_single_supporter,
    _check_synthesis_empty,
    _check_synthesis_dangling,
    _check_risk_open_on_matured,
    _check_addresses_wrong_target,
    _check_self_loop,
    _check_unknown_type_or_status,
    _check_empty_label,
    _check_dangling_endpoint,
)


def lint_document(doc: BlueprintDocument, registry: VocabularyRegistry) -> list[Diagnostic]:
    """Evaluate the full catalog. Never raises, never mutates; the result
    is sorted by rule code, then subject id."""
    findings: list[Diagnostic] = []
    for check in _CATALOG:
        findings.extend(check(doc, registry))
    findings.sort(key=lambda d: (d.rule, d.subject, d.message))
    return findings


def lint_subgraph(
    doc: BlueprintDocument,
    registry: VocabularyRegistry,
    node_ids: Iterable[str],
) -> list[Diagnostic]:
    """Lint the subgraph induced by ``node_ids``.

    Edges whose endpoints resolve to excluded nodes are treated as
    absent, so this is a local view: it may miss global findings (for
    instance cycles through outside nodes) and may report findings the
    full document would not (a supported claim whose supporters all sit
    outside the set). Edges referencing ids that exist nowhere are kept,
    so dangling-endpoint findings survive restriction.
    """
    ids = set(node_ids)
    missing = sorted(ids - {n.id for n in doc.nodes})
    if missing:
        raise UnknownNode(f"no node with id {missing[0]!r}")

    def kept(e: Edge) -> bool:
        return all(
            doc.node(ep) is None or ep in ids for ep in (e.source, e.target)
        )

    induced = replace(
        doc,
        nodes=tuple(n for n in doc.nodes if n.id in ids),
        edges=tuple(e for e in doc.edges if kept(e)),
    )
    return lint_document(induced, registry)
