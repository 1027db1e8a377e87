"""End-to-end acceptance checks; each records one PASS/FAIL summary line."""

import json
import random
import time

import pytest

from shiftcodes.cli import main
from shiftcodes.codes import apply
from shiftcodes.constructions import (
    bicontinuing_recode,
    build_sofic_example,
    noncontinuing_example,
    retract_zero_recode,
    no_retract_witness,
    random_agreeing_pair,
    repair_lift,
    sqrt_construction,
)
from shiftcodes.corpus import EXAMPLE_NAMES, example_document, one_block_codes, small_presentations, small_vertex_shifts
from shiftcodes.documents import parse_document
from shiftcodes.experiments import run_kbound_experiment
from shiftcodes.resolving import (
    check_retract,
    continuing_counterexample,
    is_right_eresolving,
    minimal_retract,
    oracle_retract,
    refute_right_continuing_bounded,
    retract_counterexample,
)
from shiftcodes.shifts import lasso_membership


@pytest.fixture(scope="module")
def kbound_suite():
    start = time.perf_counter()
    exp = run_kbound_experiment(100, max_symbols=5, seed=7)
    return exp, time.perf_counter() - start


def test_sofic_has_no_retract(report_line):
    phi = build_sofic_example()[2]
    bad = []
    for n in range(9):
        verdict = check_retract(phi, n)
        w = no_retract_witness(n)
        if verdict.holds or not retract_counterexample(phi, n, w.x, w.y):
            bad.append(n)
    ok = not bad and minimal_retract(phi) is None
    report_line("1 sofic code: no retract for n=0..8", ok, f"failing n={bad}" if bad else "")
    assert ok


def test_repair_lifter(report_line):
    X, _, phi = build_sofic_example()
    rng = random.Random(2024)
    failures = 0
    for _ in range(100):
        pair = random_agreeing_pair(rng)
        lifted = repair_lift(pair.x, pair.y)
        if not (lasso_membership(lifted, X) and lifted.left_asymptotic(pair.x) and apply(phi, lifted) == pair.y):
            failures += 1
    report_line("2 sofic repair lift on 100 random pairs", failures == 0, f"{failures} failures")
    assert failures == 0


def test_sqrt_separates_eresolving_from_continuing(report_line):
    sq = sqrt_construction(noncontinuing_example()).sqrtPhi
    eres = bool(is_right_eresolving(sq))
    no_retract = minimal_retract(sq) is None
    witness = refute_right_continuing_bounded(sq)
    refuted = witness is not None and continuing_counterexample(sq, witness.x, witness.y)
    ok = eres and no_retract and refuted
    report_line("3 sqrt code: eresolving, no retract, refuted", ok,
                f"eresolving={eres} noRetract={no_retract} refuted={refuted}")
    assert ok


def test_kbound_suite(report_line, kbound_suite):
    exp, elapsed = kbound_suite
    ok = len(exp.instances) == 100 and not exp.violations and elapsed <= 60
    report_line("4 step bound on 100 seeded codes", ok,
                f"{len(exp.violations)} violations, {elapsed:.1f}s, {exp.skipped} redrawn")
    assert ok


def test_retract_zero_recodings(report_line, kbound_suite):
    exp, _ = kbound_suite
    start = time.perf_counter()
    bad = []
    for k, inst in enumerate(exp.instances):
        one = retract_zero_recode(inst.code, samples=50, seed=k)
        two = bicontinuing_recode(inst.code, samples=50, seed=k)
        if not (one.verified and two.verified):
            bad.append(k)
    ok = not bad
    report_line("5 retract-zero and bicontinuing recodings on the suite", ok,
                f"failing={bad[:5]} {time.perf_counter() - start:.1f}s")
    assert ok


@pytest.mark.slow
def test_oracle_agrees_exhaustively(report_line):
    start = time.perf_counter()
    codes = disagreements = 0
    for X in small_presentations(3, 3):
        for phi in one_block_codes(X):
            codes += 1
            for n in range(3):
                if check_retract(phi, n).holds != oracle_retract(phi, n, 6).holds:
                    disagreements += 1
    ok = disagreements == 0
    report_line("6 decider agrees with bounded oracle", ok,
                f"{codes} codes x 3 sizes, {disagreements} disagreements, {time.perf_counter() - start:.0f}s")
    assert ok


def test_eresolving_vertex_shift_codes_have_retract_zero(report_line):
    codes = eres = violations = 0
    for X in small_vertex_shifts(3):
        for phi in one_block_codes(X):
            codes += 1
            if is_right_eresolving(phi):
                eres += 1
                violations += not check_retract(phi, 0).holds
    ok = violations == 0 and eres > 0
    report_line("7 eresolving vertex-shift codes have retract 0", ok,
                f"{eres}/{codes} eresolving, {violations} violations")
    assert ok


def test_cli_infrastructure(report_line, capsys, tmp_path):
    problems = []
    for name in EXAMPLE_NAMES:
        data = example_document(name)
        if parse_document(data).to_json() != data:
            problems.append(f"round-trip {name}")
    for kind in ("sft", "graph", "code"):
        out = tmp_path / kind
        main(["gen", kind, "--seed", "9", "--out", str(out)])
        data = json.loads((out / f"gen-{kind}.json").read_text())
        if parse_document(data).to_json() != data:
            problems.append(f"round-trip gen {kind}")
    capsys.readouterr()

    argv = ["experiment-kbound", "--count", "3", "--seed", "4", "--json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    if capsys.readouterr().out != first:
        problems.append("determinism")

    for argv, want in [
        (["check", "example:sqrt-sofic", "--property", "eresolving"], 0),
        (["check", "example:sofic-code", "--property", "retract", "--n", "5"], 1),
        (["check", "example:missing", "--property", "sft"], 2),
    ]:
        got = main(argv + ["--json"])
        report = json.loads(capsys.readouterr().out)
        if got != want or report["exitCode"] != want:
            problems.append(f"exit {argv[1]}={got}")
    ok = not problems
    report_line("8 CLI round-trip, determinism, exit codes", ok, ", ".join(problems))
    assert ok
