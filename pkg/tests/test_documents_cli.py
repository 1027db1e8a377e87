import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftcodes.cli import main
from shiftcodes.corpus import EXAMPLE_NAMES, example, example_document
from shiftcodes.documents import dumps, load_json, parse_document
from shiftcodes.errors import DocumentError
from shiftcodes.shifts import language_equal


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# documents ----------------------------------------------------------------------

@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_bundled_documents_round_trip(name):
    data = example_document(name)
    doc = parse_document(json.loads(dumps(data)))
    assert doc.to_json() == data
    assert parse_document(doc.to_json()) == doc


@pytest.mark.parametrize("name", ["golden-mean", "even-shift", "sofic-y"])
def test_parsed_shift_keeps_language(name):
    X = example(name)
    assert language_equal(parse_document(example_document(name)).presentation(), X)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["sft", "graph", "code"]))
def test_generated_documents_round_trip(tmp_path_factory, seed, kind):
    out = tmp_path_factory.mktemp("gen")
    assert main(["gen", kind, "--seed", str(seed), "--out", str(out)]) == 0
    data = load_json(out / f"gen-{kind}.json")
    assert parse_document(data).to_json() == data


def test_code_domain_by_relative_path(tmp_path):
    (tmp_path / "dom.json").write_text(dumps(example_document("full2")))
    code = example_document("xor-code")
    code["domain"] = "dom.json"
    (tmp_path / "code.json").write_text(json.dumps(code))
    doc = parse_document(load_json(tmp_path / "code.json"), tmp_path)
    assert doc.to_json() == example_document("xor-code")


@pytest.mark.parametrize("data, fragment", [
    ({"alphabet": ["0", "0"], "kind": "forbidden"}, "duplicate"),
    ({"alphabet": ["0"], "kind": "other"}, "kind"),
    ({"alphabet": ["0"], "kind": "forbidden", "forbidden": [["1"]]}, "unknown symbol"),
    ({"alphabet": ["0"], "kind": "graph", "states": ["p"], "edges": [["p", "0", "q"]]}, "unknown state"),
    ({"alphabet": ["0"], "kind": "graph", "states": ["p"], "edges": [["p", "0"]]}, "source, symbol, target"),
])
def test_malformed_shift_documents(data, fragment):
    with pytest.raises(DocumentError, match=fragment):
        parse_document(data)


def test_malformed_code_documents():
    good = example_document("xor-code")
    for key, val, fragment in [("memory", -1, "nonnegative"), ("codomainAlphabet", ["0"], "not in"),
                               ("rule", {"0": "0"}, "window"), ("rule", [], "object")]:
        bad = dict(good, **{key: val})
        with pytest.raises(DocumentError, match=fragment):
            parse_document(bad)


def test_json_syntax_error_has_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "alphabet": [\n')
    with pytest.raises(DocumentError, match=r"bad\.json:\d+:\d+"):
        load_json(p)


# exit codes ---------------------------------------------------------------------

@pytest.mark.parametrize("argv, expected", [
    (["check", "example:sqrt-sofic", "--property", "eresolving"], 0),
    (["check", "example:golden-mean", "--property", "sft"], 0),
    (["check", "example:even-shift", "--property", "sft"], 1),
    (["check", "example:sofic-code", "--property", "retract", "--n", "5"], 1),
    (["check", "example:min-code", "--property", "retract", "--n", "1"], 0),
    (["check", "example:identity-full2", "--property", "injective"], 0),
    (["check", "example:xor-code", "--property", "injective"], 1),
    (["check", "example:nope", "--property", "sft"], 2),
    (["check", "example:golden-mean", "--property", "eresolving"], 2),
    (["check", "example:sofic-code", "--property", "sft", "--max-states", "1"], 2),
    (["construct", "example:min-code", "--kind", "retract-zero"], 0),
    (["construct", "example:sofic-code", "--kind", "retract-zero"], 2),
])
def test_exit_codes(capsys, argv, expected):
    code, out, _ = run_cli(capsys, *argv, "--json")
    assert code == expected
    report = json.loads(out)
    assert report["exitCode"] == expected and report["command"] == argv[0]


def test_usage_errors_exit_2(capsys):
    for argv in (["check", "example:full2"], ["check", "example:full2", "--property", "retract", "--n", "-1"],
                 ["bogus"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_missing_file_and_bad_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run_cli(capsys, "check", str(bad), "--property", "sft")
    assert code == 2 and "bad.json:1:2" in err
    code, _, err = run_cli(capsys, "check", str(tmp_path / "none.json"), "--property", "sft")
    assert code == 2 and err.startswith("error:")


def test_retract_witness_reported(capsys):
    code, out, _ = run_cli(capsys, "check", "example:sofic-code", "--property", "retract", "--n", "2", "--json")
    v = json.loads(out)["verdicts"][0]
    assert code == 1 and v["holds"] is False and v["witnessVerified"] is True


def test_sft_step_reported(capsys):
    _, out, _ = run_cli(capsys, "check", "example:golden-mean", "--property", "sft", "--json")
    assert json.loads(out)["verdicts"][0]["step"] == 1


# determinism and outputs ----------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["gen", "code", "--symbols", "4", "--seed", "11"],
    ["gen", "graph", "--states", "4", "--seed", "3"],
    ["experiment-kbound", "--count", "5", "--seed", "2"],
    ["construct", "example:min-code", "--kind", "bicontinuing", "--seed", "5"],
])
def test_seed_determinism(capsys, argv):
    first = run_cli(capsys, *argv, "--json")
    second = run_cli(capsys, *argv, "--json")
    assert first[:2] == second[:2]
    assert json.loads(first[1])["seed"] == int(argv[-1])


def test_different_seeds_differ(capsys):
    docs = {run_cli(capsys, "gen", "graph", "--states", "4", "--seed", str(s))[1] for s in range(5)}
    assert len(docs) > 1


def test_out_directory(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "construct", "example:min-code", "--kind", "retract-zero", "--out", str(tmp_path))
    assert code == 0
    report = load_json(tmp_path / "report.json")
    for name in report["outputs"]:
        parse_document(load_json(tmp_path / name))
    assert set(report["outputs"]) | {"report.json"} == {p.name for p in tmp_path.iterdir()}


def test_written_code_feeds_back_into_check(capsys, tmp_path):
    run_cli(capsys, "construct", "example:min-code", "--kind", "retract-zero", "--out", str(tmp_path))
    bar = [n for n in load_json(tmp_path / "report.json")["outputs"] if "bar" in n][0]
    code, _, _ = run_cli(capsys, "check", str(tmp_path / bar), "--property", "retract", "--n", "0")
    assert code == 0


def test_examples_listing(capsys):
    code, out, _ = run_cli(capsys, "examples")
    assert code == 0 and out.split() == list(EXAMPLE_NAMES)
    code, out, _ = run_cli(capsys, "examples", "golden-mean")
    assert json.loads(out) == example_document("golden-mean")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "shiftcodes", "check", "example:golden-mean",
                          "--property", "sft", "--json"], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["exitCode"] == 0
