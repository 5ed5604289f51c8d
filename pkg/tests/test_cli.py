"""CLI behaviour: subcommands, exit codes, determinism, diagnostics."""

import json

import pytest

import kgcontinuum.cli as cli
from kgcontinuum import Dimension, IntegrityError, ValidationReport, Finding, parse_cxt, parse_json_context

from helpers import corpus

ALL_DIMS = [d.value for d in Dimension]


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def req_file(tmp_path):
    path = tmp_path / "req.json"
    path.write_text(json.dumps({
        "community": "cultural heritage",
        "task": "portal validation",
        "required": {"pragmatic-affordance": ["OWL DL reasoning", "SHACL"]},
    }))
    return str(path)


@pytest.fixture()
def cxt_file(tmp_path):
    path = tmp_path / "toy.cxt"
    path.write_text("B\n\n2\n2\n\ng1\ng2\nm1\nm2\nX.\n.X\n")
    return str(path)


# --- happy paths -----------------------------------------------------------------


def test_lattice_json_output(capsys):
    code, out, err = run(capsys, "lattice", "--corpus", "builtin", "--dimension", "pragmatic-property")
    assert code == 0
    assert err == ""
    doc = json.loads(out)
    assert len(doc["concepts"]) == 10
    assert len(doc["covers"]) == 15
    assert doc["top"] == "c9"


def test_lattice_from_cxt_file(capsys, cxt_file):
    code, out, _ = run(capsys, "lattice", "--context", cxt_file, "--dimension", "combined")
    assert code == 0
    assert len(json.loads(out)["concepts"]) == 4


def test_lattice_from_json_file(capsys, tmp_path):
    path = tmp_path / "toy.json"
    path.write_text(json.dumps({
        "dimension": "semantic-property",
        "objects": ["g1"],
        "attributes": ["m1"],
        "incidence": [[1]],
    }))
    code, out, _ = run(capsys, "lattice", "--context", str(path))
    assert code == 0
    assert json.loads(out)["concepts"][0]["intent"] == ["m1"]


def test_legend_markdown_and_csv(capsys):
    code, out, _ = run(capsys, "legend", "--corpus", "builtin", "--dimension", "pragmatic-property")
    assert code == 0
    assert out.splitlines()[0] == "| ID | Objects | Attributes |"
    code, out, _ = run(capsys, "legend", "--corpus", "builtin", "--dimension", "pragmatic-property", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "id,objects,attributes"


def test_dot_labels(capsys):
    code, out, _ = run(capsys, "dot", "--corpus", "builtin", "--dimension", "pragmatic-property", "--labels", "id+intent")
    assert code == 0
    assert out.startswith("digraph lattice {")
    assert "\\n" in out


def test_implications_json_and_text(capsys):
    code, out, _ = run(capsys, "implications", "--corpus", "builtin", "--dimension", "semantic-affordance")
    assert code == 0
    doc = json.loads(out)
    assert all(set(imp) == {"premise", "conclusion"} for imp in doc)
    code, out, _ = run(capsys, "implications", "--corpus", "builtin", "--dimension", "semantic-affordance", "--format", "text")
    assert code == 0
    assert " -> " in out.splitlines()[0]


def test_fit_subcommand(capsys, req_file):
    code, out, _ = run(capsys, "fit", "--corpus", "builtin", "--kg", "Wikidata", "--require", req_file)
    assert code == 0
    doc = json.loads(out)
    assert doc["fit"] is False
    assert doc["gap"]["pragmatic-affordance"] == ["OWL DL reasoning"]
    assert "cost" not in doc


def test_fit_with_cost_model(capsys, req_file, tmp_path):
    model = tmp_path / "cost.json"
    model.write_text('{"add_weight": 2.5}')
    code, out, _ = run(capsys, "fit", "--corpus", "builtin", "--kg", "Wikidata", "--require", req_file, "--cost-model", str(model))
    assert code == 0
    assert json.loads(out)["cost"] == 2.5


def test_delta_between_kgs(capsys):
    code, out, _ = run(capsys, "delta", "--corpus", "builtin", "--kg", "Europeana", "--to-kg", "LOV")
    assert code == 0
    doc = json.loads(out)
    assert doc["delta"]["pragmatic-property"] == {"add": ["PROV-O"], "remove": ["OAI-ORE aggregation"]}


def test_delta_to_requirement(capsys, req_file):
    code, out, _ = run(capsys, "delta", "--corpus", "builtin", "--kg", "Wikidata", "--require", req_file)
    assert code == 0
    doc = json.loads(out)
    assert doc["target"] == "cultural heritage/portal validation"
    assert doc["delta"]["pragmatic-affordance"]["remove"] == []


def test_validate_reports_warnings(capsys):
    code, out, _ = run(capsys, "validate", "--corpus", "builtin", "--dimension", "semantic-affordance")
    assert code == 0
    doc = json.loads(out)
    assert doc["errors"] == []
    assert doc["warnings"][0]["code"] == "universal-attribute"
    assert doc["warnings"][0]["location"] == "attribution"


def test_validate_malformed_file(capsys, tmp_path):
    path = tmp_path / "bad.cxt"
    path.write_text("B\n\n2\n1\n\ng1\ng1\nm\nX\nX\n")
    code, out, _ = run(capsys, "validate", "--context", str(path), "--dimension", "combined")
    assert code == 1
    doc = json.loads(out)
    assert doc["errors"][0]["code"] == "duplicate-object"
    assert doc["errors"][0]["location"] == "line 7"


def test_corpus_export_json_round_trip(capsys):
    code, out, _ = run(capsys, "corpus", "export", "--dimension", "semantic-property", "--format", "json")
    assert code == 0
    assert parse_json_context(out) == corpus().contexts[Dimension.SEMANTIC_PROPERTY]


def test_corpus_export_cxt_round_trip(capsys):
    code, out, _ = run(capsys, "corpus", "export", "--dimension", "pragmatic-affordance", "--format", "cxt")
    assert code == 0
    assert parse_cxt(out, Dimension.PRAGMATIC_AFFORDANCE) == corpus().contexts[Dimension.PRAGMATIC_AFFORDANCE]


def test_corpus_export_combined(capsys):
    code, out, _ = run(capsys, "corpus", "export", "--dimension", "combined")
    assert code == 0
    doc = json.loads(out)
    assert doc["dimension"] == "combined"
    assert len(doc["attributes"]) == 42


def test_corpus_verify_clean(capsys):
    code, out, _ = run(capsys, "corpus", "verify")
    assert code == 0
    assert json.loads(out) == {"errors": [], "warnings": []}


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "lattice.json"
    code, out, _ = run(capsys, "lattice", "--corpus", "builtin", "--dimension", "combined", "--out", str(target))
    assert code == 0
    assert out == ""
    code, out, _ = run(capsys, "lattice", "--corpus", "builtin", "--dimension", "combined")
    assert target.read_text(encoding="utf-8") == out


# --- exit codes and diagnostics -----------------------------------------------------


def test_unknown_subcommand_exits_one(capsys):
    code, out, err = run(capsys, "frobnicate")
    assert code == 1
    assert out == ""
    assert "error:" in err


def test_missing_required_flag_exits_one(capsys):
    code, _, err = run(capsys, "fit", "--corpus", "builtin", "--kg", "Wikidata")
    assert code == 1
    assert "error:" in err


def test_cxt_without_dimension_flag(capsys, cxt_file):
    code, _, err = run(capsys, "lattice", "--context", cxt_file)
    assert code == 1
    assert "dimension-flag-required" in err


def test_json_with_dimension_flag(capsys, tmp_path):
    path = tmp_path / "toy.json"
    path.write_text(json.dumps({"dimension": "combined", "objects": [], "attributes": [], "incidence": []}))
    code, _, err = run(capsys, "lattice", "--context", str(path), "--dimension", "combined")
    assert code == 1
    assert "dimension-flag-forbidden" in err


def test_context_and_corpus_conflict(capsys, cxt_file):
    code, _, err = run(capsys, "lattice", "--context", cxt_file, "--corpus", "builtin", "--dimension", "combined")
    assert code == 1
    assert "conflicting-input" in err


def test_missing_file_exits_one(capsys):
    code, _, err = run(capsys, "lattice", "--context", "/no/such/file.cxt", "--dimension", "combined")
    assert code == 1
    assert "error:" in err


def test_unknown_kg_exits_one(capsys, req_file):
    code, _, err = run(capsys, "fit", "--corpus", "builtin", "--kg", "Freebase", "--require", req_file)
    assert code == 1
    assert "unknown-object" in err


def test_bad_requirement_json_exits_one(capsys, tmp_path):
    path = tmp_path / "req.json"
    path.write_text("{broken")
    code, _, err = run(capsys, "fit", "--corpus", "builtin", "--kg", "Wikidata", "--require", str(path))
    assert code == 1
    assert "invalid-json" in err


def test_combined_context_rejected_for_fit(capsys, req_file, tmp_path):
    path = tmp_path / "combined.json"
    path.write_text(json.dumps({
        "dimension": "combined",
        "objects": ["g"],
        "attributes": ["m"],
        "incidence": [[1]],
    }))
    code, _, err = run(capsys, "fit", "--context", str(path), "--kg", "g", "--require", req_file)
    assert code == 1
    assert "combined-dimension" in err


def test_integrity_failure_exits_two(capsys, monkeypatch):
    def boom():
        raise IntegrityError("corpus-corrupt", "synthetic failure")

    monkeypatch.setattr(cli, "load_corpus", boom)
    code, _, err = run(capsys, "corpus", "verify")
    assert code == 2
    assert "corpus-corrupt" in err


def test_golden_mismatch_exits_two(capsys, monkeypatch):
    report = ValidationReport(errors=(Finding("missing-golden-concept", "synthetic", "pragmatic-property"),))
    monkeypatch.setattr(cli, "verify_corpus", lambda _: report)
    code, out, _ = run(capsys, "corpus", "verify")
    assert code == 2
    assert json.loads(out)["errors"][0]["code"] == "missing-golden-concept"


def test_help_exits_zero():
    with pytest.raises(SystemExit) as exit_info:
        cli.main(["--help"])
    assert exit_info.value.code == 0


# --- diagnostics styling ---------------------------------------------------------


class _TtyStderr:
    def __init__(self, wrapped):
        self._wrapped = wrapped

    def isatty(self):
        return True

    def __getattr__(self, name):
        return getattr(self._wrapped, name)


def test_stderr_color_on_tty(capsys, monkeypatch):
    import sys

    monkeypatch.delenv("CONTINUUM_NO_COLOR", raising=False)
    monkeypatch.setattr(sys, "stderr", _TtyStderr(sys.stderr))
    code, _, err = run(capsys, "frobnicate")
    assert code == 1
    assert "\x1b[31m" in err


def test_no_color_env_disables_styling(capsys, monkeypatch):
    import sys

    monkeypatch.setenv("CONTINUUM_NO_COLOR", "1")
    monkeypatch.setattr(sys, "stderr", _TtyStderr(sys.stderr))
    code, _, err = run(capsys, "frobnicate")
    assert code == 1
    assert "\x1b[" not in err


# --- determinism -------------------------------------------------------------------


def test_repeated_runs_are_byte_identical(capsys, req_file):
    variants = [
        ["lattice", "--corpus", "builtin", "--dimension", "combined"],
        ["legend", "--corpus", "builtin", "--dimension", "semantic-property", "--format", "csv"],
        ["dot", "--corpus", "builtin", "--dimension", "pragmatic-affordance", "--labels", "id+intent"],
        ["implications", "--corpus", "builtin", "--dimension", "semantic-affordance"],
        ["fit", "--corpus", "builtin", "--kg", "Wikidata", "--require", req_file],
        ["corpus", "export", "--dimension", "combined"],
    ]
    for argv in variants:
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second
        assert first[1].encode("utf-8") == second[1].encode("utf-8")
