"""Agent-facing command line over blueprint files.

Every subcommand reads the target file, applies one operation, and
persists via atomic write (temp file + rename), bumping the revision by
exactly one per mutating invocation. Output is line-oriented and
stable-ordered; ``--json`` switches to machine output. Lint findings
never affect the exit code unless ``--strict`` asks for it.

Exit codes: 0 success, 1 usage or file error, 2 operation error
(unknown element, duplicate id), 3 lint findings under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Any, Sequence

from .lint import Diagnostic, diagnostics_to_json, lint_document
from .model import (
    BLUEPRINT_SUFFIX,
    BlueprintDocument,
    DocumentError,
    ParseError,
    add_edge,
    add_node,
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
)
from .vocabulary import ConfigError, Role, VocabularyRegistry, resolve_vocabulary

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_OPERATION = 2
EXIT_STRICT = 3

WORKSPACE_CONFIG = "blueprint.config.json"
WORKSPACE_ENV = "BLUEPRINT_WORKSPACE"
DEFAULT_FILENAME = "main" + BLUEPRINT_SUFFIX


class CliError(Exception):
    """Usage or file-level failure; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise CliError(message)


def atomic_write(path: Path, text: str) -> None:
    """Write whole-file contents via temp file + rename, so a reader (or
    a crash) sees either the old bytes or the new bytes, never a mix."""
    fd, tmp_name = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def load_workspace_vocabulary(start_dir: Path) -> dict | None:
    """Find blueprint.config.json and return its "vocabulary" value.

    BLUEPRINT_WORKSPACE pins the directory; otherwise the search walks
    upward from the document's directory.
    """
    env = os.environ.get(WORKSPACE_ENV)
    if env:
        candidates = [Path(env) / WORKSPACE_CONFIG]
    else:
        here = start_dir.resolve()
        candidates = [d / WORKSPACE_CONFIG for d in [here, *here.parents]]
    for candidate in candidates:
        if candidate.is_file():
            try:
                raw = json.loads(candidate.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise CliError(f"unreadable workspace config {candidate}: {exc}") from exc
            if not isinstance(raw, dict):
                raise CliError(f"workspace config {candidate} must be a JSON object")
            return raw.get("vocabulary")
    return None


def _discover_file(args: argparse.Namespace) -> Path:
    if getattr(args, "file", None):
        return Path(args.file)
    matches = sorted(Path.cwd().glob(f"*{BLUEPRINT_SUFFIX}"))
    if not matches:
        raise CliError(f"no *{BLUEPRINT_SUFFIX} file in {Path.cwd()}; use --file")
    if len(matches) > 1:
        names = ", ".join(m.name for m in matches)
        raise CliError(f"ambiguous: several blueprint files here ({names}); use --file")
    return matches[0]


def _load(path: Path) -> BlueprintDocument:
    try:
        return parse_document(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _registry_for(doc: BlueprintDocument, path: Path) -> VocabularyRegistry:
    workspace = load_workspace_vocabulary(path.parent)
    return resolve_vocabulary(doc.vocabulary, workspace)


def _print_json(payload: Any) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False))


def _emit_mutation(
    args: argparse.Namespace,
    path: Path,
    doc: BlueprintDocument,
    registry: VocabularyRegistry,
    affected: str,
) -> None:
    """Persist the mutated document with a +1 revision and report it."""
    persisted = replace(doc, revision=doc.revision + 1)
    atomic_write(path, serialize_document(persisted))
    if args.json:
        _print_json({"id": affected, "revision": persisted.revision})
        return
    print(affected)
    for finding in lint_document(persisted, registry):
        if finding.subject == affected:
            print(f"warning: {finding.message}", file=sys.stderr)


# --- subcommand handlers -----------------------------------------------------


def _cmd_init(args: argparse.Namespace) -> int:
    raw = args.path or args.file or DEFAULT_FILENAME
    path = Path(raw)
    if not path.name.endswith(BLUEPRINT_SUFFIX):
        path = path.with_name(path.name + BLUEPRINT_SUFFIX)
    if path.exists():
        raise CliError(f"{path} already exists")
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = BlueprintDocument(title=args.title)
    atomic_write(path, serialize_document(doc))
    if args.json:
        _print_json({"path": str(path), "revision": 0})
    else:
        print(path)
    return EXIT_OK


def _cmd_node(args: argparse.Namespace) -> int:
    path = _discover_file(args)
    doc = _load(path)
    registry = _registry_for(doc, path)
    if args.action == "add":
        doc, affected = add_node(
            doc, args.type, args.label, body=args.body, node_id=args.id, registry=registry
        )
    elif args.action == "set":
        if args.status is None and args.label is None and args.body is None:
            raise CliError("node set: give at least one of --status/--label/--body")
        affected = args.node_id
        if args.status is not None:
            doc = set_status(doc, affected, args.status)
        if args.label is not None:
            doc = set_label(doc, affected, args.label)
        if args.body is not None:
            doc = set_body(doc, affected, args.body)
    elif args.action == "status":
        doc = set_status(doc, args.node_id, args.value)
        affected = args.node_id
    elif args.action == "label":
        doc = set_label(doc, args.node_id, args.value)
        affected = args.node_id
    elif args.action == "body":
        doc = set_body(doc, args.node_id, args.value)
        affected = args.node_id
    else:  # rm
        doc = remove_node(doc, args.node_id)
        affected = args.node_id
    _emit_mutation(args, path, doc, registry, affected)
    return EXIT_OK


def _cmd_edge(args: argparse.Namespace) -> int:
    path = _discover_file(args)
    doc = _load(path)
    registry = _registry_for(doc, path)
    if args.action == "add":
        doc, affected = add_edge(
            doc, args.type, args.source, args.target, body=args.body, edge_id=args.id
        )
    else:  # rm
        doc = remove_edge(doc, args.edge_id)
        affected = args.edge_id
    _emit_mutation(args, path, doc, registry, affected)
    return EXIT_OK


def _cmd_setter(args: argparse.Namespace) -> int:
    path = _discover_file(args)
    doc = _load(path)
    registry = _registry_for(doc, path)
    if args.command == "status":
        doc = set_status(doc, args.element_id, args.value)
    elif args.command == "label":
        doc = set_label(doc, args.element_id, args.value)
    else:  # body (nodes or edges)
        doc = set_body(doc, args.element_id, args.value)
    _emit_mutation(args, path, doc, registry, args.element_id)
    return EXIT_OK


def _badge(node, registry: VocabularyRegistry) -> str:
    return f"{node.id} [{node.node_type}/{node.status}] {node.label}".rstrip()


def _cmd_show(args: argparse.Namespace) -> int:
    path = _discover_file(args)
    doc = _load(path)
    registry = _registry_for(doc, path)
    edge_filter = set(args.edges.split(",")) if args.edges else None
    sub = neighborhood(doc, args.node_id, depth=args.depth, edge_filter=edge_filter)
    if args.json:
        _print_json(subgraph_to_json(sub))
        return EXIT_OK

    nodes = {n.id: n for n in sub.nodes}
    printed_edges: set[str] = set()
    seen: set[str] = set()

    def render(node_id: str, indent: int) -> None:
        seen.add(node_id)
        if indent == 0:
            print(_badge(nodes[node_id], registry))
        for e in sub.edges:
            if e.id in printed_edges or node_id not in (e.source, e.target):
                continue
            other = e.target if e.source == node_id else e.source
            if other in seen and not (e.source == e.target == node_id):
                continue
            printed_edges.add(e.id)
            if e.source == e.target:
                print("  " * (indent + 1) + f"<loop> {e.id} [{e.edge_type}]")
                continue
            marker = "<-" if e.target == node_id else "->"
            print("  " * (indent + 1) + f"{marker} {e.id} [{e.edge_type}] {_badge(nodes[other], registry)}")
            render(other, indent + 1)

    render(args.node_id, 0)
    for e in sub.edges:
        if e.id not in printed_edges:
            print(f"(also) {e.id} [{e.edge_type}] {e.source} -> {e.target}")
    return EXIT_OK


def _cmd_list(args: argparse.Namespace) -> int:
    path = _discover_file(args)
    doc = _load(path)
    rows = [
        n
        for n in doc.nodes
        if (args.type is None or n.node_type == args.type)
        and (args.status is None or n.status == args.status)
    ]
    if args.json:
        _print_json(
            [
                {"id": n.id, "type": n.node_type, "status": n.status, "label": n.label}
                for n in rows
            ]
        )
        return EXIT_OK
    for n in rows:
        print(f"{n.id}\t{n.node_type}\t{n.status}\t{n.label}")
    return EXIT_OK


def _cmd_lint(args: argparse.Namespace) -> int:
    path = _discover_file(args)
    try:
        doc = _load(path)
    except CliError:
        raise
    except ParseError as exc:
        # parse findings share the diagnostic surface, at error severity
        finding = Diagnostic(
            rule="PARSE_ERROR",
            subject=exc.location or str(path),
            message=str(exc),
            severity="error",
        )
        if args.json:
            _print_json(diagnostics_to_json([finding]))
        else:
            print(f"error {finding.subject}: {finding.message}")
        return EXIT_USAGE
    registry = _registry_for(doc, path)
    findings = lint_document(doc, registry)
    if args.json:
        _print_json(diagnostics_to_json(findings))
    elif not findings:
        print("no findings")
    else:
        for d in findings:
            print(f"{d.rule} {d.subject}: {d.message}")
    if findings and args.strict:
        return EXIT_STRICT
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    path = _discover_file(args)
    doc = _load(path)
    registry = _registry_for(doc, path)
    summary = stats(doc, registry)
    if args.json:
        _print_json(summary)
        return EXIT_OK
    for type_name, row in summary["nodes"].items():
        cells = " ".join(f"{status}={count}" for status, count in row.items())
        print(f"{type_name}: {cells}")
    print("edges: " + " ".join(f"{t}={c}" for t, c in summary["edges"].items()))
    print(f"warnings: {summary['warnings']}")
    return EXIT_OK


_DOT_SHAPES = {
    Role.ARGUMENT_CORE: "box",
    Role.CONSTRUCTION_HANDLE: "note",
    Role.REVIEW_CHANNEL: "diamond",
    Role.FLEXIBILITY_VALVE: "hexagon",
}

_DOT_STYLES = {
    "supports": "solid",
    "expands": "dashed",
    "contradicts": "bold",
    "addresses": "dotted",
    "relates": "dashed",
}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _export_dot(doc: BlueprintDocument, registry: VocabularyRegistry) -> str:
    lines = ["digraph blueprint {", "  rankdir=BT;"]
    for n in doc.nodes:
        spec = registry.node_spec(n.node_type)
        shape = _DOT_SHAPES.get(spec.role, "ellipse") if spec else "ellipse"
        label = _dot_escape(n.label) + "\\n" + _dot_escape(f"{n.node_type}/{n.status}")
        lines.append(f'  "{n.id}" [label="{label}", shape={shape}];')
    for e in doc.edges:
        style = _DOT_STYLES.get(e.edge_type, "solid")
        lines.append(
            f'  "{e.source}" -> "{e.target}" [label="{_dot_escape(e.edge_type)}", style={style}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _export_markdown(doc: BlueprintDocument, registry: VocabularyRegistry) -> str:
    out = [f"# {doc.title}" if doc.title else "# Blueprint", ""]
    by_type: dict[str, list] = {}
    for n in doc.nodes:
        by_type.setdefault(n.node_type, []).append(n)
    for type_name in sorted(by_type):
        out.append(f"## {type_name}")
        out.append("")
        for n in by_type[type_name]:
            out.append(f"### {n.id} — {n.label} [{n.status}]")
            out.append("")
            if n.body:
                out.append(n.body)
                out.append("")
            incident = [e for e in doc.edges if n.id in (e.source, e.target)]
            if incident:
                for e in incident:
                    suffix = f" — {e.body}" if e.body else ""
                    out.append(f"- {e.id} ({e.edge_type}): {e.source} -> {e.target}{suffix}")
                out.append("")
    return "\n".join(out).rstrip("\n") + "\n"


def _cmd_export(args: argparse.Namespace) -> int:
    path = _discover_file(args)
    doc = _load(path)
    registry = _registry_for(doc, path)
    if args.format == "dot":
        sys.stdout.write(_export_dot(doc, registry))
    elif args.format == "markdown":
        sys.stdout.write(_export_markdown(doc, registry))
    else:
        raise CliError(f"unknown export format {args.format!r}")
    return EXIT_OK


# --- parser wiring -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # the shared flags sit on every leaf parser: nested subparsers reset
    # parent-level values, so `--file/--json` must come after the verb
    common = _Parser(add_help=False)
    common.add_argument("--file", default=None, help=f"target *{BLUEPRINT_SUFFIX} file (default: the sole one in cwd)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = _Parser(prog="blueprint", description="Edit and inspect blueprint argument graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_init = sub.add_parser("init", parents=[common], help="create an empty blueprint file")
    p_init.add_argument("path", nargs="?", help=f"file to create (default {DEFAULT_FILENAME})")
    p_init.add_argument("--title", help="document title")
    p_init.set_defaults(handler=_cmd_init)

    p_node = sub.add_parser("node", help="add, edit, or remove nodes")
    node_sub = p_node.add_subparsers(dest="action", required=True)
    n_add = node_sub.add_parser("add", parents=[common])
    n_add.add_argument("type")
    n_add.add_argument("label")
    n_add.add_argument("--body")
    n_add.add_argument("--id")
    n_add.set_defaults(handler=_cmd_node)
    n_set = node_sub.add_parser("set", parents=[common])
    n_set.add_argument("node_id")
    n_set.add_argument("--status")
    n_set.add_argument("--label")
    n_set.add_argument("--body")
    n_set.set_defaults(handler=_cmd_node)
    for name in ("status", "label", "body"):
        alias = node_sub.add_parser(name, parents=[common])
        alias.add_argument("node_id")
        alias.add_argument("value")
        alias.set_defaults(handler=_cmd_node)
    n_rm = node_sub.add_parser("rm", parents=[common])
    n_rm.add_argument("node_id")
    n_rm.set_defaults(handler=_cmd_node)

    p_edge = sub.add_parser("edge", help="add or remove edges")
    edge_sub = p_edge.add_subparsers(dest="action", required=True)
    e_add = edge_sub.add_parser("add", parents=[common])
    e_add.add_argument("type")
    e_add.add_argument("source")
    e_add.add_argument("target")
    e_add.add_argument("--body")
    e_add.add_argument("--id")
    e_add.set_defaults(handler=_cmd_edge)
    e_rm = edge_sub.add_parser("rm", parents=[common])
    e_rm.add_argument("edge_id")
    e_rm.set_defaults(handler=_cmd_edge)

    for name, help_text in (
        ("status", "set a node's status"),
        ("label", "set a node's label"),
        ("body", "set a node's or edge's body"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("element_id")
        p.add_argument("value")
        p.set_defaults(handler=_cmd_setter)

    p_show = sub.add_parser("show", parents=[common], help="render a node's neighborhood")
    p_show.add_argument("node_id")
    p_show.add_argument("--depth", type=int, default=1)
    p_show.add_argument("--edges", help="comma-separated edge types to follow")
    p_show.set_defaults(handler=_cmd_show)

    p_list = sub.add_parser("list", parents=[common], help="list nodes, optionally filtered")
    p_list.add_argument("--type")
    p_list.add_argument("--status")
    p_list.set_defaults(handler=_cmd_list)

    p_lint = sub.add_parser("lint", parents=[common], help="run the structural rule catalog")
    p_lint.add_argument("--strict", action="store_true", help="exit 3 when any warning exists")
    p_lint.set_defaults(handler=_cmd_lint)

    p_stats = sub.add_parser("stats", parents=[common], help="counts per type and status")
    p_stats.set_defaults(handler=_cmd_stats)

    p_export = sub.add_parser("export", parents=[common], help="render the whole graph")
    p_export.add_argument("format", choices=["dot", "markdown"])
    p_export.set_defaults(handler=_cmd_export)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OPERATION


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
