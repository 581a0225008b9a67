import json
import subprocess
import sys

import pytest

from ratsec import automata as fa
from ratsec import catalog
from ratsec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_xsection_check_lamplighter(tmp_path, capsys):
    path = tmp_path / "lamplighter.json"
    fa.save(catalog.get("lamplighter"), path)
    code, out = run(capsys, "xsection", "check", "--lang", str(path), "--group", "wr(C2,Z)", "--cap", "14", "--radius", "3")
    assert code == 0
    assert json.loads(out)["injective"] is True


def test_xsection_check_violation(capsys):
    code, out = run(capsys, "xsection", "check", "--lang", "builtin:z-geodesics", "--group", "Z", "--cap", "2", "--radius", "4")
    assert code == 1
    assert json.loads(out)["uncovered_at_cap"] == ["ttt", "TTT", "tttt", "TTTT"]


def test_houghton_crossing_of_witness_word(capsys):
    code, out = run(capsys, "houghton", "witness", "--K", "3")
    word = json.loads(out)["word"]
    code, out = run(capsys, "houghton", "crossing", "--word", word)
    assert code == 0 and out.strip() == "3"


def test_houghton_crossing_perm(capsys):
    code, out = run(capsys, "houghton", "crossing", "--perm", "(1 -1)(2 -2); shift=0")
    assert out.strip() == "2"


def test_grig_quotient_size(capsys):
    code, out = run(capsys, "grig", "quotient-size", "--n", "3")
    assert code == 0 and out.strip() == "128"


def test_grig_section_and_phi(capsys):
    assert run(capsys, "grig", "section", "--word", "b", "--vertex", "10")[1].strip() == "a"
    assert run(capsys, "grig", "phi", "--word", "a")[1].strip() == "aca"


def test_grig_relators(capsys):
    code, out = run(capsys, "grig", "relators")
    assert code == 0 and all(r["trivial"] for r in json.loads(out))


def test_automaton_det_round_trips(tmp_path, capsys):
    code, out = run(capsys, "automaton", "det", "--lang", "builtin:lamplighter")
    m = fa.loads(out)
    assert fa.languages_equal(m, catalog.get("lamplighter"))


def test_automaton_dot_to_file(tmp_path, capsys):
    path = tmp_path / "m.dot"
    code, _ = run(capsys, "automaton", "dot", "--lang", "builtin:z-geodesics", "--out", str(path))
    assert code == 0 and path.read_text() == fa.to_dot(catalog.get("z-geodesics"))


def test_automaton_classify_regex(capsys):
    code, out = run(capsys, "automaton", "classify", "--regex", "(ab)*", "--alphabet", "a,b")
    assert json.loads(out) == {"growth": "PolynomialBounded", "witness": ["ab"]}


def test_automaton_combine(capsys):
    code, out = run(capsys, "automaton", "combine", "--lang", "builtin:z-geodesics", "--mode", "complement")
    m = fa.loads(out)
    assert fa.recognize(m, "tT") and not fa.recognize(m, "tt")


def test_order_commands(capsys):
    assert json.loads(run(capsys, "order", "compare", "--cone", "lex:2", "--word", "", "--word2", "t")[1])["relation"] == "less"
    code, out = run(capsys, "order", "chain-density", "--cone", "lex:2", "--radius", "1")
    assert json.loads(out)["density"] == "1/1"
    code, out = run(capsys, "order", "antichain", "--cone", "dom:2", "--words", "s", "t")
    assert code == 0
    code, out = run(capsys, "order", "antichain", "--cone", "lex:2", "--words", "s", "t")
    assert code == 1


def test_xsection_build_wreath_matches_lamplighter(capsys):
    code, out = run(capsys, "xsection", "build-wreath", "--lamp", "C2", "--base", "Z")
    assert fa.languages_equal(fa.loads(out), catalog.get("lamplighter"))


def test_xsection_mirror(capsys):
    code, out = run(capsys, "xsection", "mirror", "--cone", "z+")
    assert fa.languages_equal(fa.loads(out), catalog.get("z-geodesics"))


def test_missing_file_is_usage_error(capsys):
    code, out = run(capsys, "automaton", "det", "--lang", "/nonexistent.json")
    assert code == 2


def test_schema_error_names_field(tmp_path, capsys):
    path = tmp_path / "bad.json"
    doc = fa.to_json(catalog.get("z-geodesics"))
    del doc["initial"]
    path.write_text(json.dumps(doc))
    code, out = run(capsys, "automaton", "trim", "--lang", str(path))
    assert code == 2 and "initial" in json.loads(out)["message"]


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 2


def test_capacity_is_exit_two(capsys):
    code, out = run(capsys, "grig", "complexity", "--word", "abacabadacab", "--depth", "1")
    assert code == 2


def test_verify_suite(capsys):
    code, out = run(capsys, "verify")
    assert code == 0 and all(r["ok"] for r in json.loads(out))


def test_outputs_are_deterministic(capsys):
    first = run(capsys, "automaton", "det", "--lang", "builtin:lamplighter", "--format", "dot")[1]
    second = run(capsys, "automaton", "det", "--lang", "builtin:lamplighter", "--format", "dot")[1]
    assert first == second


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "ratsec", "grig", "quotient-size", "--n", "2"], capture_output=True, text=True
    )
    assert out.returncode == 0 and out.stdout.strip() == "8"
