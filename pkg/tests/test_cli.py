import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from cextkit.cli import DATA_DIR, main
from cextkit.corpus import extensions_n2, torsor_corpus
from cextkit.formats import (FormatError, parse_any, parse_diagram, parse_group_file,
                             parse_simplicial, serialize_diagram, serialize_group,
                             serialize_simplicial)

DOCS = Path(__file__).resolve().parent.parent / "docs"


def run(*args):
    return CliRunner().invoke(main, list(args))


def summary(result):
    return result.output.strip()


@pytest.mark.parametrize("args,expected", [
    (("cohomology", "C2", "C2", "2"), "Z/2"),
    (("cohomology", "C3", "C2", "2"), "0"),
    (("cohomology", "C1", "C2", "2"), "0"),
])
def test_cohomology_command(args, expected):
    r = run(*args)
    assert r.exit_code == 0 and summary(r) == expected


def test_classify_command():
    r = run("classify", "C2", "C2")
    assert r.exit_code == 0
    assert summary(r) == "2 classes; group Z/2; representatives C4, C2×C2"


def test_check_central_on_bundled_files():
    r = run("check-central", "q8-to-v4.json")
    assert r.exit_code == 0 and summary(r).startswith("central")
    r = run("check-central", "d4-to-c2.json")
    assert r.exit_code == 1 and "r²" in summary(r)
    r = run("check-central", "c4-double.json")
    assert r.exit_code == 0 and "64 = 2·32" in r.output


def test_centralise_command(tmp_path):
    out = tmp_path / "c.json"
    r = run("centralise", "d4-to-c2.json", "-o", str(out))
    assert r.exit_code == 0
    F = parse_diagram(out)
    assert F.top_object.order == 4
    assert run("check-central", str(out)).exit_code == 0


def test_torsor_check_command():
    assert run("torsor-check", "neutral-c2-c2-1.json").exit_code == 0
    assert run("torsor-check", "crossed-c2-c4.json").exit_code == 0
    assert run("torsor-check", "non-resolution.json").exit_code in (1, 4)


@pytest.mark.parametrize("args,code", [
    (("classify", "C2", "S3"), 4),
    (("cohomology", "C7", "C2", "2"), 3),
    (("check-central", "no-such-file.json"), 2),
    (("cohomology", "C2", "Nope", "2"), 2),
])
def test_exit_codes(args, code):
    assert run(*args).exit_code == code


def test_json_reports_are_deterministic():
    a = run("classify", "S3", "C2", "--json")
    b = run("classify", "S3", "C2", "--json")
    assert a.exit_code == 0 and a.output == b.output
    rep = json.loads(a.output)
    assert rep["command"] == "classify" and "timing" not in rep
    t = json.loads(run("classify", "S3", "C2", "--json", "--timing").output)
    assert "timing" in t


def test_cap_flag_reaches_enumeration():
    r = run("check-central", "c4-double.json", "--cap", "2")
    assert r.exit_code == 3


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"classify_max_order": 4}))
    assert run("classify", "C2", "C4", "--config", str(cfg)).exit_code == 3
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("classify", "C2", "C2", "--config", str(cfg)).exit_code == 2


def test_verify_n1_is_green():
    r = run("verify", "n1", "--json")
    assert r.exit_code == 0
    rep = json.loads(r.output)
    assert rep["verdict"]["ok"] and rep["verdict"]["suites"]["n1"]["total"] == 32


def test_export_and_reverify_corpus(tmp_path):
    r = run("export-corpus", str(tmp_path), "--limit", "3")
    assert r.exit_code == 0
    assert len(list(tmp_path.glob("*.json"))) == 9
    for p in tmp_path.glob("*.json"):
        parse_any(p)


# ------------------------------------------------------------ formats

def schema_validator(name):
    registry = Registry()
    for p in DOCS.glob("*.schema.json"):
        registry = registry.with_resource(p.name, Resource.from_contents(json.loads(p.read_text())))
    schema = json.loads((DOCS / name).read_text())
    return Draft202012Validator(schema, registry=registry)


def test_bundled_files_match_schemas():
    vd = schema_validator("diagramfile.schema.json")
    vs = schema_validator("simplicialfile.schema.json")
    for p in DATA_DIR.glob("*.json"):
        doc = json.loads(p.read_text())
        (vd if doc["format"].startswith("cextkit.diagram") else vs).validate(doc)


def test_diagram_roundtrip_on_corpus():
    vd = schema_validator("diagramfile.schema.json")
    for F in extensions_n2(8)[::9]:
        text = serialize_diagram(F)
        vd.validate(json.loads(text))
        assert serialize_diagram(parse_diagram(text)) == text


def test_simplicial_roundtrip_on_corpus():
    vs = schema_validator("simplicialfile.schema.json")
    for T in torsor_corpus()[::11]:
        text = serialize_simplicial(T)
        vs.validate(json.loads(text))
        assert serialize_simplicial(parse_simplicial(text)) == text


def test_group_roundtrip():
    from cextkit.corpus import named_group
    G = named_group("Q8")
    doc = serialize_group(G)
    schema_validator("groupfile.schema.json").validate(doc)
    H = parse_group_file(doc)
    assert H.same_table(G) and H.labels == G.labels


@pytest.mark.parametrize("text", ["{", '{"format": "cextkit.diagram/1"}', "[]",
                                  '{"format": "cextkit.unknown/1"}'])
def test_malformed_files_raise_format_errors(text):
    with pytest.raises(FormatError):
        parse_any(text)


def test_invalid_map_is_a_format_error(tmp_path):
    doc = json.loads((DATA_DIR / "c4-double.json").read_text())
    doc["maps"][2]["images"] = [0, 1, 1, 0]
    with pytest.raises(FormatError):
        parse_diagram(doc)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    r = run("check-central", str(bad), "--json")
    assert r.exit_code == 2 and json.loads(r.output)["exit_code"] == 2
