"""JSON documents for shifts, codes and verdicts.

Shift document::

    {"alphabet": ["0", "1"], "kind": "forbidden", "forbidden": [["1", "1"]]}
    {"alphabet": [...], "kind": "graph", "states": [...], "edges": [["s", "a", "t"], ...]}

Code document::

    {"domain": <shift document or path>, "memory": 0, "anticipation": 1,
     "rule": {"0,1": "0", ...}, "codomainAlphabet": ["0", "1"]}

Words are arrays of symbols.  A plain string is accepted as a word when every
symbol of the alphabet is a single character.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .codes import SlidingBlockCode
from .errors import CapacityError, DocumentError
from .shifts import Presentation, SftSpec, from_forbidden

DEFAULT_MAX_STATES = 64
DEFAULT_MAX_SYMBOLS = 16


@dataclass(frozen=True)
class ShiftDocument:
    alphabet: tuple[str, ...]
    kind: str
    forbidden: tuple[tuple[str, ...], ...] = ()
    states: tuple[str, ...] = ()
    edges: tuple[tuple[str, str, str], ...] = ()

    def to_json(self) -> dict:
        out = {"alphabet": list(self.alphabet), "kind": self.kind}
        if self.kind == "forbidden":
            out["forbidden"] = [list(w) for w in self.forbidden]
        else:
            out["states"] = list(self.states)
            out["edges"] = [list(e) for e in self.edges]
        return out

    def presentation(self) -> Presentation:
        if self.kind == "forbidden":
            return from_forbidden(SftSpec(self.alphabet, self.forbidden))
        return Presentation.from_edges(self.alphabet, self.edges, self.states)

    @classmethod
    def from_presentation(cls, X: Presentation) -> ShiftDocument:
        if X.sft is not None:
            return cls(X.sft.alphabet, "forbidden", tuple(sorted(X.sft.forbidden)))
        return cls(X.alphabet, "graph", states=X.states, edges=X.edges)


@dataclass(frozen=True)
class CodeDocument:
    domain: ShiftDocument
    memory: int
    anticipation: int
    rule: tuple[tuple[tuple[str, ...], str], ...]
    codomainAlphabet: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "memory": self.memory,
            "anticipation": self.anticipation,
            "rule": {",".join(w): v for w, v in self.rule},
            "codomainAlphabet": list(self.codomainAlphabet),
        }

    def code(self) -> SlidingBlockCode:
        return SlidingBlockCode(self.domain.presentation(), self.memory, self.anticipation,
                                dict(self.rule), self.codomainAlphabet)

    @classmethod
    def from_code(cls, phi: SlidingBlockCode) -> CodeDocument:
        rule = tuple(sorted(phi.rule.items()))
        return cls(ShiftDocument.from_presentation(phi.domain), phi.memory, phi.anticipation,
                   rule, phi.codomain)


# parsing ----------------------------------------------------------------------

def _fail(where: str, msg: str):
    raise DocumentError(f"{where}: {msg}")


def _symbols(data, where):
    if not isinstance(data, list) or not all(isinstance(a, str) and a for a in data):
        _fail(where, "expected a list of nonempty strings")
    if len(set(data)) != len(data):
        _fail(where, "duplicate symbols")
    for a in data:
        if "," in a:
            _fail(where, f"symbol {a!r} contains ','")
    return tuple(data)


def _word(data, alphabet, where):
    if isinstance(data, str):
        if not all(len(a) == 1 for a in alphabet):
            _fail(where, "string words need single-character symbols; use a list")
        data = list(data)
    if not isinstance(data, list):
        _fail(where, "expected a word (list of symbols)")
    for a in data:
        if a not in alphabet:
            _fail(where, f"unknown symbol {a!r}")
    return tuple(data)


def parse_shift(data, where: str = "shift") -> ShiftDocument:
    if not isinstance(data, dict):
        _fail(where, "expected an object")
    alphabet = _symbols(data.get("alphabet"), f"{where}.alphabet")
    kind = data.get("kind")
    if kind == "forbidden":
        raw = data.get("forbidden", [])
        if not isinstance(raw, list):
            _fail(f"{where}.forbidden", "expected a list of words")
        words = tuple(_word(w, alphabet, f"{where}.forbidden[{i}]") for i, w in enumerate(raw))
        if any(len(w) == 0 for w in words):
            _fail(f"{where}.forbidden", "empty forbidden word")
        return ShiftDocument(alphabet, kind, words)
    if kind == "graph":
        states = data.get("states")
        if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
            _fail(f"{where}.states", "expected a list of strings")
        known = set(states)
        edges = []
        for i, e in enumerate(data.get("edges", [])):
            if not (isinstance(e, list) and len(e) == 3):
                _fail(f"{where}.edges[{i}]", "expected [source, symbol, target]")
            s, a, t = e
            if s not in known or t not in known:
                _fail(f"{where}.edges[{i}]", "unknown state")
            if a not in alphabet:
                _fail(f"{where}.edges[{i}]", f"unknown symbol {a!r}")
            edges.append((s, a, t))
        return ShiftDocument(alphabet, kind, states=tuple(states), edges=tuple(edges))
    _fail(f"{where}.kind", "expected 'forbidden' or 'graph'")


def parse_code(data, base: Path | None = None, where: str = "code") -> CodeDocument:
    if not isinstance(data, dict):
        _fail(where, "expected an object")
    dom = data.get("domain")
    if isinstance(dom, str):
        path = Path(dom) if base is None else base / dom
        dom = load_json(path)
    domain = parse_shift(dom, f"{where}.domain")
    memory, anticipation = data.get("memory", 0), data.get("anticipation", 0)
    for key, val in (("memory", memory), ("anticipation", anticipation)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            _fail(f"{where}.{key}", "expected a nonnegative integer")
    codomain = _symbols(data.get("codomainAlphabet"), f"{where}.codomainAlphabet")
    raw = data.get("rule")
    if not isinstance(raw, dict):
        _fail(f"{where}.rule", "expected an object")
    rule = []
    for key, val in raw.items():
        word = tuple(key.split(",")) if key else ()
        for a in word:
            if a not in domain.alphabet:
                _fail(f"{where}.rule[{key!r}]", f"unknown symbol {a!r}")
        if len(word) != memory + anticipation + 1:
            _fail(f"{where}.rule[{key!r}]", "block length does not match the window")
        if val not in codomain:
            _fail(f"{where}.rule[{key!r}]", f"value {val!r} not in codomainAlphabet")
        rule.append((word, val))
    return CodeDocument(domain, memory, anticipation, tuple(sorted(rule)), codomain)


def load_json(path: Path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def parse_document(data, base: Path | None = None):
    """A :class:`ShiftDocument` or :class:`CodeDocument`, by shape."""
    if isinstance(data, dict) and "rule" in data:
        return parse_code(data, base)
    return parse_shift(data)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()[:16]


def check_caps(X: Presentation, max_states: int = DEFAULT_MAX_STATES,
               max_symbols: int = DEFAULT_MAX_SYMBOLS):
    if len(X.states) > max_states:
        raise CapacityError(f"{len(X.states)} states exceed the cap of {max_states}")
    if len(X.alphabet) > max_symbols:
        raise CapacityError(f"{len(X.alphabet)} symbols exceed the cap of {max_symbols}")
