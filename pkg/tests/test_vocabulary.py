import pytest

from blueprint import ConfigError, Role, resolve_vocabulary

EXPECTED_LADDERS = {
    "claim": ("draft", "stated", "supported"),
    "evidence": ("missing", "cited", "verified"),
    "assumption": ("given", "questioned"),
    "definition": ("draft", "stated"),
    "question": ("open", "answered"),
    "risk": ("noted", "addressed", "accepted"),
    "synthesis": ("draft", "stated"),
}

EXPECTED_MATURED = {
    "claim": {"supported"},
    "evidence": {"cited", "verified"},
    "assumption": {"given"},
    "definition": {"stated"},
    "question": {"answered"},
    "risk": {"addressed", "accepted"},
    "synthesis": {"stated"},
}

EXPECTED_ROLES = {
    "claim": Role.ARGUMENT_CORE,
    "evidence": Role.ARGUMENT_CORE,
    "assumption": Role.ARGUMENT_CORE,
    "definition": Role.CONSTRUCTION_HANDLE,
    "question": Role.CONSTRUCTION_HANDLE,
    "risk": Role.REVIEW_CHANNEL,
    "synthesis": Role.FLEXIBILITY_VALVE,
}


def test_builtin_registry_is_the_golden_table():
    reg = resolve_vocabulary()
    assert sorted(reg.node_types) == sorted(EXPECTED_LADDERS)
    for name, spec in reg.node_types.items():
        assert spec.ladder == EXPECTED_LADDERS[name]
        assert spec.matured == EXPECTED_MATURED[name]
        assert spec.role == EXPECTED_ROLES[name]
        assert reg.node_provenance[name] == "built-in"

    assert sorted(reg.edge_types) == ["addresses", "contradicts", "expands", "relates", "supports"]
    supports = reg.edge_types["supports"]
    assert supports.sources == {"claim", "evidence", "assumption", "synthesis"}
    assert supports.targets == {"claim", "synthesis"}
    assert not supports.symmetric
    addresses = reg.edge_types["addresses"]
    assert addresses.sources == frozenset()
    assert addresses.targets == {"risk", "question"}
    for name in ("expands", "contradicts", "relates"):
        spec = reg.edge_types[name]
        assert spec.sources == frozenset() and spec.targets == frozenset()
    assert reg.edge_types["contradicts"].symmetric
    assert reg.edge_types["relates"].symmetric
    assert not reg.edge_types["expands"].symmetric


def test_workspace_override_replaces_wholesale():
    ws = {"node_types": [{"name": "evidence", "ladder": ["missing", "replicated"]}]}
    reg = resolve_vocabulary(workspace_override=ws)
    assert reg.node_types["evidence"].ladder == ("missing", "replicated")
    # replaced wholesale: the built-in matured set is gone, not merged
    assert reg.node_types["evidence"].matured == {"replicated"}
    assert reg.node_provenance["evidence"] == "workspace"
    for name in EXPECTED_LADDERS:
        if name != "evidence":
            assert reg.node_types[name].ladder == EXPECTED_LADDERS[name]
            assert reg.node_provenance[name] == "built-in"


def test_document_override_layers_over_workspace():
    ws = {"node_types": [{"name": "evidence", "ladder": ["missing", "replicated"]}]}
    doc = {"node_types": [{"name": "hypothesis", "ladder": ["posed", "tested"], "matured": ["tested"]}]}
    reg = resolve_vocabulary(document_override=doc, workspace_override=ws)
    assert len(reg.node_types) == 8
    assert reg.node_provenance["hypothesis"] == "document"
    assert reg.node_provenance["evidence"] == "workspace"
    assert reg.node_types["hypothesis"].default_status == "posed"


def test_document_override_wins_over_workspace_for_same_name():
    ws = {"node_types": [{"name": "claim", "ladder": ["ws-only"]}]}
    doc = {"node_types": [{"name": "claim", "ladder": ["doc-draft", "doc-final"]}]}
    reg = resolve_vocabulary(document_override=doc, workspace_override=ws)
    assert reg.node_types["claim"].ladder == ("doc-draft", "doc-final")
    assert reg.node_provenance["claim"] == "document"


def test_edge_type_override():
    doc = {"edge_types": [{"name": "supports", "sources": [], "targets": ["claim"]}]}
    reg = resolve_vocabulary(document_override=doc)
    assert reg.edge_types["supports"].targets == {"claim"}
    assert reg.edge_types["supports"].sources == frozenset()
    assert reg.edge_provenance["supports"] == "document"


def test_matured_defaults_to_last_rung_when_omitted():
    reg = resolve_vocabulary(document_override={"node_types": [{"name": "memo", "ladder": ["a", "b", "c"]}]})
    assert reg.node_types["memo"].matured == {"c"}


@pytest.mark.parametrize(
    "override",
    [
        {"node_types": [{"name": "bad", "ladder": []}]},
        {"node_types": [{"name": "bad", "ladder": ["a"], "matured": ["z"]}]},
        {"node_types": [{"name": "bad", "ladder": ["a", "a"]}]},
        {"node_types": [{"name": "bad", "ladder": ["a"], "role": "nonsense"}]},
        {"node_types": [{"name": "dup", "ladder": ["a"]}, {"name": "dup", "ladder": ["b"]}]},
        {"node_types": [{"ladder": ["a"]}]},
        {"node_types": [{"name": "bad", "ladder": ["a"], "surprise": 1}]},
        {"node_types": "not-a-list"},
        {"edge_types": [{"name": "bad", "sources": "claim"}]},
        {"edge_types": [{"name": "bad", "symmetric": "yes"}]},
        {"unexpected": []},
        "not-an-object",
    ],
)
def test_structurally_invalid_overrides_raise(override):
    with pytest.raises(ConfigError):
        resolve_vocabulary(document_override=override)


def test_default_status_for_unknown_type_is_draft():
    reg = resolve_vocabulary()
    assert reg.default_status("lemma") == "draft"
    assert reg.default_status("claim") == "draft"
    assert reg.default_status("evidence") == "missing"
