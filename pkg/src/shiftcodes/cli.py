"""Command line front end.

Examples::

    shiftcodes examples
    shiftcodes check example:sofic-code --property retract --n 5
    shiftcodes check example:golden-mean --property sft --json
    shiftcodes construct --kind retract-zero example:min-code --out build/
    shiftcodes experiment-kbound --count 100 --max-symbols 5 --seed 7
    shiftcodes gen sft --symbols 3 --seed 1

Exit codes: 0 when the property holds (or the command succeeded), 1 when it
is refuted, 2 on bad input.  Reports on stdout are deterministic; timing
goes to stderr.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from .codes import CodedPair, Decision, SlidingBlockCode, image, is_injective
from .constructions import (
    bicontinuing_recode,
    build_sofic_example,
    retract_zero_recode,
    no_retract_witness,
    random_agreeing_pair,
    repair_lift,
    sqrt_construction,
)
from .corpus import EXAMPLE_NAMES, example_document, random_graph, random_one_block, random_one_step_sft
from .documents import (
    DEFAULT_MAX_STATES,
    CodeDocument,
    ShiftDocument,
    check_caps,
    digest,
    dumps,
    load_json,
    parse_document,
)
from .errors import DocumentError, ShiftError
from .experiments import run_kbound_experiment
from .lasso import LassoPoint
from .resolving import (
    check_retract,
    is_left_eresolving,
    is_right_continuing_sft,
    is_right_eresolving,
    minimal_retract,
    retract_counterexample,
)
from .shifts import Presentation, language_equal, step_of

PROPERTIES = ("eresolving", "left-eresolving", "retract", "minimal-retract", "sft", "step",
              "injective", "equal", "right-continuing")
KINDS = ("sqrt", "retract-zero", "bicontinuing", "sofic-example")
EXAMPLE_PREFIX = "example:"


class Run:
    """Accumulates a report: inputs, verdicts and written documents."""

    def __init__(self, command: str, seed: int | None = None):
        self.command = command
        self.seed = seed
        self.inputs = []
        self.verdicts = []
        self.outputs = {}

    def report(self) -> dict:
        out = {"command": self.command, "inputs": self.inputs, "verdicts": self.verdicts}
        if self.seed is not None:
            out["seed"] = self.seed
        if self.outputs:
            out["outputs"] = sorted(self.outputs)
        return out


# inputs -----------------------------------------------------------------------

def _load(spec: str, run: Run, max_states: int):
    """Parse a document given as a path or as ``example:NAME``."""
    if spec.startswith(EXAMPLE_PREFIX):
        name = spec[len(EXAMPLE_PREFIX):]
        if name not in EXAMPLE_NAMES:
            raise DocumentError(f"{spec}: unknown example; try `shiftcodes examples`")
        data, base = example_document(name), None
    else:
        path = Path(spec)
        data, base = load_json(path), path.parent
    doc = parse_document(data, base)
    run.inputs.append({"name": spec, "digest": digest(doc.to_json())})
    if isinstance(doc, CodeDocument):
        phi = doc.code()
        check_caps(phi.domain, max_states)
        return phi
    X = doc.presentation()
    check_caps(X, max_states)
    return X


def _need_code(obj, prop):
    if not isinstance(obj, SlidingBlockCode):
        raise DocumentError(f"--property {prop} needs a code document")
    return obj


def _as_shift(obj) -> Presentation:
    return image(obj) if isinstance(obj, SlidingBlockCode) else obj


def _jsonable(obj):
    if isinstance(obj, (LassoPoint, CodedPair)):
        return obj.to_json()
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _decision(prop: str, d: Decision) -> dict:
    out = {"property": prop, "holds": d.holds}
    if d.witness is not None:
        out["witness"] = _jsonable(d.witness)
    return out


# commands -----------------------------------------------------------------------

def cmd_check(args, run: Run) -> int:
    objs = [_load(f, run, args.max_states) for f in args.files]
    prop = args.property
    if prop == "equal":
        if len(objs) != 2:
            raise DocumentError("--property equal needs two documents")
        holds = language_equal(_as_shift(objs[0]), _as_shift(objs[1]))
        run.verdicts.append({"property": prop, "holds": holds})
        return 0 if holds else 1
    if len(objs) != 1:
        raise DocumentError(f"--property {prop} takes one document")
    obj = objs[0]
    if prop in ("sft", "step"):
        step = step_of(_as_shift(obj))
        run.verdicts.append({"property": prop, "holds": step is not None, "step": step})
        return 0 if step is not None else 1
    phi = _need_code(obj, prop)
    if prop == "eresolving":
        v = _decision(prop, is_right_eresolving(phi))
    elif prop == "left-eresolving":
        v = _decision(prop, is_left_eresolving(phi))
    elif prop == "injective":
        v = _decision(prop, is_injective(phi))
    elif prop == "retract":
        v = check_retract(phi, args.n).to_json()
        if not v["holds"]:
            w = CodedPair.from_json(v["witness"])
            v["witnessVerified"] = retract_counterexample(phi, args.n, w.x, w.y)
    elif prop == "minimal-retract":
        R = minimal_retract(phi)
        v = {"property": prop, "holds": R is not None, "R": R}
    else:
        v = {"property": prop, "holds": is_right_continuing_sft(phi)}
    run.verdicts.append(v)
    return 0 if v["holds"] else 1


def _shift_doc(X: Presentation) -> dict:
    return ShiftDocument.from_presentation(X).to_json()


def _code_doc(phi: SlidingBlockCode) -> dict:
    return CodeDocument.from_code(phi).to_json()


def cmd_construct(args, run: Run) -> int:
    kind = args.kind
    if kind == "sofic-example":
        X, Y, phi = build_sofic_example()
        run.outputs.update({"sofic-x.json": _shift_doc(X), "sofic-y.json": _shift_doc(Y),
                            "sofic-code.json": _code_doc(phi)})
        witnesses = all(
            not check_retract(phi, n).holds
            and retract_counterexample(phi, n, *_pair(no_retract_witness(n)))
            for n in range(4))
        rng = random.Random(args.seed)
        lifts = 0
        for _ in range(20):
            pair = random_agreeing_pair(rng)
            repair_lift(pair.x, pair.y)
            lifts += 1
        checks = {"noRetractWitnesses": witnesses, "minimalRetractNone": minimal_retract(phi) is None,
                  "repairLifts": lifts == 20}
    else:
        if len(args.files) != 1:
            raise DocumentError(f"--kind {kind} takes one code document")
        phi = _need_code(_load(args.files[0], run, args.max_states), kind)
        if kind == "sqrt":
            sp = sqrt_construction(phi)
            run.outputs.update({"sqrt-x.json": _shift_doc(sp.sqrtX), "sqrt-y.json": _shift_doc(sp.sqrtY),
                                "sqrt-code.json": _code_doc(sp.sqrtPhi)})
            checks = {"imageMatches": language_equal(image(sp.sqrtPhi), sp.sqrtY)}
            run.verdicts.append({"kind": kind, "spacer": sp.spacer, "renamed": sp.renamed})
        else:
            build = retract_zero_recode if kind == "retract-zero" else bicontinuing_recode
            rc = build(phi, seed=args.seed)
            run.outputs.update({"psi.json": _code_doc(rc.conjugacyPsi),
                                "recoded-domain.json": _shift_doc(rc.recodedDomain),
                                "bar-phi.json": _code_doc(rc.barPhi)})
            if rc.conjugacyTheta is not None:
                run.outputs.update({"theta.json": _code_doc(rc.conjugacyTheta),
                                    "recoded-codomain.json": _shift_doc(rc.recodedCodomain)})
            checks = dict(rc.checks)
            run.verdicts.append({"kind": kind, "R": rc.R})
    run.verdicts.append({"kind": kind, "checks": checks, "holds": all(checks.values())})
    return 0 if all(checks.values()) else 1


def _pair(p: CodedPair):
    return p.x, p.y


def cmd_experiment(args, run: Run) -> int:
    exp = run_kbound_experiment(args.count, args.max_symbols, args.seed)
    data = exp.to_json()
    data["holds"] = not exp.violations
    run.verdicts.append(data)
    return 0 if not exp.violations else 1


def cmd_gen(args, run: Run) -> int:
    rng = random.Random(args.seed)
    if args.kind == "sft":
        X = random_one_step_sft(rng, args.symbols)
        doc = _shift_doc(X)
        run.verdicts.append({"kind": "sft", "step": step_of(X)})
    elif args.kind == "graph":
        X = random_graph(rng, args.states, args.symbols)
        doc = _shift_doc(X)
        run.verdicts.append({"kind": "graph", "states": len(X.states)})
    else:
        X = _load(args.shift, run, args.max_states) if args.shift else random_one_step_sft(rng, args.symbols)
        if isinstance(X, SlidingBlockCode):
            raise DocumentError("--shift must be a shift document")
        phi = random_one_block(rng, X, args.image_symbols or len(X.used_symbols))
        doc = _code_doc(phi)
        run.verdicts.append({"kind": "code", "imageSymbols": len(phi.codomain)})
    run.outputs[f"gen-{args.kind}.json"] = doc
    return 0


def cmd_examples(args, run: Run) -> int:
    if args.name is None:
        run.verdicts.append({"examples": list(EXAMPLE_NAMES)})
        return 0
    if args.name not in EXAMPLE_NAMES:
        raise DocumentError(f"unknown example {args.name!r}")
    run.outputs[f"{args.name}.json"] = example_document(args.name)
    return 0


# plumbing ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--out", type=Path, help="directory for written documents and report.json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    common.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES,
                        help="reject input presentations with more states")

    parser = argparse.ArgumentParser(prog="shiftcodes", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide a property of a shift or code")
    p.add_argument("files", nargs="+", help="document paths or example:NAME")
    p.add_argument("--property", required=True, choices=PROPERTIES)
    p.add_argument("--n", type=int, default=0, help="retract size for --property retract")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct", parents=[common], help="build and verify a construction")
    p.add_argument("files", nargs="*", help="input code (not needed for sofic-example)")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("experiment-kbound", parents=[common],
                       help="check the step bound on random codes with a retract")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-symbols", type=int, default=5)
    p.set_defaults(func=cmd_experiment, seed=7)

    p = sub.add_parser("gen", parents=[common], help="generate a random document")
    p.add_argument("kind", choices=("sft", "graph", "code"))
    p.add_argument("--symbols", type=int, default=3)
    p.add_argument("--states", type=int, default=3)
    p.add_argument("--image-symbols", type=int, help="codomain size for gen code")
    p.add_argument("--shift", help="domain for gen code (path or example:NAME)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("examples", parents=[common], help="list or print bundled documents")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_examples)
    return parser


def _validate(args, parser):
    if getattr(args, "n", 0) < 0:
        parser.error("--n must be nonnegative")
    if getattr(args, "count", 1) < 1:
        parser.error("--count must be >= 1")
    for name in ("max_symbols", "symbols", "states", "max_states"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name.replace('_', '-')} must be >= 1")


def _emit(args, run: Run, code: int):
    report = run.report()
    report["exitCode"] = code
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for name, doc in run.outputs.items():
            (args.out / name).write_text(dumps(doc))
        (args.out / "report.json").write_text(dumps(report))
    if args.json:
        sys.stdout.write(dumps(report))
        return
    if run.outputs and args.out is None and len(run.outputs) == 1:
        sys.stdout.write(dumps(next(iter(run.outputs.values()))))
        return
    for v in run.verdicts:
        if "examples" in v:
            print("\n".join(v["examples"]))
            continue
        print(" ".join(f"{k}={_short(v[k])}" for k in sorted(v)))
    if run.outputs and args.out is not None:
        print(f"wrote {len(run.outputs)} documents to {args.out}")
    elif run.outputs:
        print(f"{len(run.outputs)} documents built; use --out DIR to write them")


def _short(value):
    if isinstance(value, (dict, list)):
        text = dumps(value).replace("\n", " ")
        text = " ".join(text.split())
        return text if len(text) <= 200 else text[:197] + "..."
    return value


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    run = Run(args.command, args.seed if args.command in ("experiment-kbound", "gen", "construct") else None)
    start = time.perf_counter()
    try:
        code = args.func(args, run)
    except (ShiftError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.json:
            report = run.report()
            report.update(error=str(exc), exitCode=2)
            sys.stdout.write(dumps(report))
        return 2
    _emit(args, run, code)
    print(f"elapsed {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
