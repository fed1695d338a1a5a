import io
import json
import subprocess
import sys

import pytest

from fibrato.cli import dsl_to_json, emit_dot, parse, run, serialize
from fibrato.cli.parse import KINDS, infer_kind
from fibrato.core import find_isomorphism
from fibrato.errors import PresentationSyntaxError, SchemaError


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def corpus(fixtures_dir):
    return sorted(p for p in fixtures_dir.iterdir() if p.is_file())


def test_corpus_roundtrip(fixtures_dir):
    files = corpus(fixtures_dir)
    assert len(files) >= 10
    for path in files:
        fmt = "dsl" if path.suffix == ".dsl" else "json"
        doc = parse(path.read_text(), fmt)
        assert doc.kind in KINDS
        text = serialize(doc)
        again = parse(text)
        assert again == doc, path.name
        assert serialize(again) == text


def test_dsl_matches_json(fixtures_dir):
    a = parse((fixtures_dir / "c3.dsl").read_text(), "dsl")
    b = parse((fixtures_dir / "c3.json").read_text())
    assert find_isomorphism(a.payload, b.payload) is not None
    k = dsl_to_json((fixtures_dir / "s3.dsl").read_text())
    assert infer_kind(k) == "klein"


def test_dsl_errors_carry_positions():
    with pytest.raises(PresentationSyntaxError) as info:
        dsl_to_json("obj A\nmor f A -> B\n")
    assert info.value.line == 2
    with pytest.raises(PresentationSyntaxError):
        parse("{not json", "json")


def test_schema_errors_have_paths(fixtures_dir):
    with pytest.raises(SchemaError, match=r"morphisms\[1\]\.src"):
        parse((fixtures_dir / "invalid" / "bad-src.json").read_text())


def test_dot_is_deterministic(fixtures_dir):
    doc = parse((fixtures_dir / "codiscrete3.json").read_text())
    first, second = emit_dot(doc.payload), emit_dot(doc.payload)
    assert first == second
    edges = [line for line in first.splitlines() if "[label=" in line]
    assert first.startswith("digraph") and len(edges) == 6
    assert edges == sorted(edges)
    assert emit_dot(doc.payload, identities=True).count("[label=") == 9
    code, out, _ = call("dot", fixtures_dir / "codiscrete3.json")
    assert code == 0 and out == call("dot", fixtures_dir / "codiscrete3.json")[1]


def test_exit_codes(fixtures_dir):
    assert call("check", fixtures_dir / "c3.json")[0] == 0
    code, _, err = call("check", fixtures_dir / "invalid" / "c3-assoc-mutated.json")
    assert code == 1 and "associativity" in err
    code, _, err = call("check", fixtures_dir / "invalid" / "broken.json")
    assert code == 2 and "SyntaxError" in err
    assert call("check", fixtures_dir / "invalid" / "broken.dsl")[0] == 2
    assert call("check", fixtures_dir / "invalid" / "non-composable.json")[0] == 1
    code, _, err = call("check", fixtures_dir / "invalid" / "bad-src.json")
    assert code == 2 and "SchemaError" in err
    assert call()[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("check", fixtures_dir / "missing.json")[0] == 2
    assert call("aut2", fixtures_dir / "codiscrete3.json", "--budget", 10)[0] == 1


def test_json_output(fixtures_dir):
    code, out, _ = call("--format", "json", "stats", fixtures_dir / "d3-rot.json")
    assert code == 0
    assert json.loads(out) == {"objects": 3, "morphisms": 18, "composable_pairs": 108}
    assert call("stats", fixtures_dir / "d3-rot.json", "--format", "json")[1] == out


@pytest.mark.parametrize(
    "argv, code, needle",
    [
        (["transform", "c3-rot.json"], 0, "3 objects, 9 morphisms"),
        (["complete", "--variant", "con-right", "collapse-action.json"], 0, "3 objects, 5 morphisms"),
        (["complete", "--variant", "abs-left", "collapse-cat-action.json"], 0, "3 objects, 7 morphisms"),
        (["wreath", "--inner", "dihedral:3", "--outer", "cyclic:2"], 0, "72"),
        (["hierarchy", "hierarchy-codiscrete.json"], 0, "6 objects, 36 morphisms"),
        (["compare-models", "--inner", "cyclic:3", "--outer", "cyclic:2"], 0, "36"),
        (["aut2", "codiscrete3.json"], 0, "6 one-cells, 36 two-cells"),
        (["square", "codiscrete3.json"], 0, "324/324"),
        (["square", "codiscrete3.json", "--cell", 3, "--morphism", "1->2"], 0, "commutes"),
        (["klein", "s3-h12.json"], 0, "count obstruction"),
        (["geometry", "geometry-d3.json"], 0, "local_groups"),
        (["iso", "c3.json", "c3.dsl"], 0, "isomorphic"),
    ],
)
def test_subcommands(fixtures_dir, argv, code, needle):
    argv = [fixtures_dir / a if str(a).endswith((".json", ".dsl")) else a for a in argv]
    got, out, err = call(*argv)
    assert got == code, err
    assert needle in out


def test_square_dot(fixtures_dir):
    code, out, _ = call("square", fixtures_dir / "codiscrete3.json", "--cell", 0, "--morphism", "1->2", "--dot")
    assert code == 0 and out.startswith("digraph") and "commutes" in out


def test_console_script_module_entry(fixtures_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "fibrato", "stats", str(fixtures_dir / "c3.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "1 objects, 3 morphisms, 9 composable pairs"
