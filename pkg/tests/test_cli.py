import json

import pytest

from crossed_desc.cli import main
from crossed_desc.fixtures import fix_a, fix_a_core, fix_b_core
from crossed_desc.serialize import (
    envelope,
    dumps_canonical,
    parse_document,
    serialize_document,
)


@pytest.fixture
def run(capsys):
    def _run(*args):
        code = main(list(args))
        return code, capsys.readouterr().out

    return _run


@pytest.fixture
def fixa_doc(tmp_path):
    path = tmp_path / "fixa.json"
    path.write_text(serialize_document("diagram", fix_a()), encoding="utf-8")
    return str(path)


@pytest.fixture
def fixa_core_doc(tmp_path):
    path = tmp_path / "fixa-core.json"
    path.write_text(serialize_document("crossed", fix_a_core()), encoding="utf-8")
    return str(path)


@pytest.fixture
def fat_spec_doc(tmp_path):
    path = tmp_path / "fat-spec.json"
    payload = {
        "kind": "fatten",
        "params": {
            "base": {"kind": "constant-diagram", "params": {"base": "fix-a-core"}},
            "copies": 2,
        },
    }
    path.write_text(dumps_canonical(envelope("fixture-spec", payload)), encoding="utf-8")
    return str(path)


def test_round_trip_is_byte_identical():
    for kind, structure in (
        ("crossed", fix_a_core()),
        ("crossed", fix_b_core()),
        ("diagram", fix_a()),
    ):
        doc = serialize_document(kind, structure)
        kind2, parsed = parse_document(doc)
        assert kind2 == kind
        assert serialize_document(kind2, parsed) == doc


def test_validate_ok(run, fixa_doc, fixa_core_doc):
    for path in (fixa_doc, fixa_core_doc):
        code, out = run("validate", path)
        assert code == 0
        assert json.loads(out)["report"]["ok"] is True


def test_validate_reports_broken_entry(run, tmp_path, fixa_core_doc):
    doc = json.loads(open(fixa_core_doc).read())
    # break one twist entry: Peiffer and equivariance checks must flag it
    doc["payload"]["twist"][-1][2] = doc["payload"]["twist"][0][2]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    code, out = run("validate", str(bad))
    assert code == 1
    rules = {v["rule"] for v in json.loads(out)["report"]["violations"]}
    assert rules  # cites the violated axioms by stable rule tag
    assert rules & {"twist-unit", "twist-bijective", "peiffer", "equivariance"}


def test_malformed_json_exits_2(run, tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _ = run("validate", str(bad))
    assert code == 2


def test_wrong_version_exits_2(run, tmp_path):
    bad = tmp_path / "version.json"
    bad.write_text(json.dumps({"formatVersion": "other/9", "kind": "diagram",
                               "payload": {}}), encoding="utf-8")
    code, _ = run("validate", str(bad))
    assert code == 2


def test_missing_file_exits_2(run, tmp_path):
    code, _ = run("validate", str(tmp_path / "absent.json"))
    assert code == 2


def test_desc_counts(run, fixa_doc):
    code, out = run("desc", fixa_doc)
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 2
    code, out = run("desc", fixa_doc, "--classes")
    assert code == 0
    payload = json.loads(out)
    assert payload["classCount"] == 1
    assert len(payload["classes"][0]["members"]) == 2


def test_desc_fixture_spec_input(run, tmp_path):
    spec = tmp_path / "cech.json"
    spec.write_text(dumps_canonical(envelope(
        "fixture-spec", {"kind": "cech", "params": {"base": "fix-a-core", "cover": 2}}
    )), encoding="utf-8")
    code, out = run("desc", str(spec))
    assert code == 0
    assert json.loads(out)["count"] == 8


def test_desc_bound_exits_3(run, fixa_doc):
    code, _ = run("desc", fixa_doc, "--bound", "1")
    assert code == 3


def test_weq_ok(run, fat_spec_doc):
    code, out = run("weq", fat_spec_doc)
    assert code == 0
    assert json.loads(out)["weakEquivalence"] is True


def test_transfer_ok(run, fat_spec_doc):
    code, out = run("transfer", fat_spec_doc, "--trace")
    assert code == 0
    payload = json.loads(out)
    assert payload["agree"] is True
    assert payload["sourceClasses"] == payload["targetClasses"] == 1
    assert payload["surjectivityWitnesses"]


def test_lift(run, fat_spec_doc):
    code, out = run("lift", fat_spec_doc, "--target", "0", "--trace")
    assert code == 0
    payload = json.loads(out)
    assert payload["trace"]["kind"] == "surjectivity"
    code, out = run(
        "lift", fat_spec_doc, "--target",
        json.dumps({"x": "*@0", "g": "1@0.0", "a": "2.1@0"}),
    )
    assert code == 0
    assert json.loads(out)["lifted"]["a"] == "2.1"


def test_lift_bad_target(run, fat_spec_doc):
    code, _ = run("lift", fat_spec_doc, "--target", "99")
    assert code == 4


def test_fixture_expansion(run, tmp_path):
    spec = tmp_path / "inner.json"
    spec.write_text(dumps_canonical(envelope(
        "fixture-spec", {"kind": "inner", "params": {"group": "z3"}}
    )), encoding="utf-8")
    code, out = run("fixture", str(spec))
    assert code == 0
    kind, built = parse_document(out)
    assert kind == "crossed"
    assert len(built.g2.group("*")) == 3


def test_output_is_deterministic(run, fixa_doc):
    _, out1 = run("desc", fixa_doc, "--classes")
    _, out2 = run("desc", fixa_doc, "--classes")
    assert out1 == out2


def test_unknown_command_exits_2(run):
    code, _ = run("frobnicate", "x.json")
    assert code == 2
