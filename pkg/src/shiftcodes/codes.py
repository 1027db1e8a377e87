"""Sliding block codes over presented shifts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Mapping

from .errors import DomainMismatchError, NotInDomainError
from .lasso import LassoPoint, Word
from .shifts import (
    Presentation,
    block_name,
    language,
    language_included,
    lasso_membership,
    make_alphabet,
    random_lasso,
    reverse,
)


@dataclass(frozen=True, eq=False)
class SlidingBlockCode:
    """Code with local rule on windows ``x[i - memory .. i + anticipation]``.

    ``rule`` maps every word of length ``memory + anticipation + 1`` of the
    domain to a codomain symbol.
    """

    domain: Presentation
    memory: int
    anticipation: int
    rule: Mapping[Word, str]
    codomain: tuple[str, ...]

    def __post_init__(self):
        if self.memory < 0 or self.anticipation < 0:
            raise ValueError("memory and anticipation must be nonnegative")
        codomain = make_alphabet(self.codomain)
        rule = {tuple(k): str(v) for k, v in self.rule.items()}
        blocks = language(self.domain, self.window)
        missing = blocks - rule.keys()
        if missing:
            raise ValueError(f"rule undefined on {sorted(missing)[:5]}")
        extra = rule.keys() - blocks
        if extra:
            raise ValueError(f"rule given on words outside the domain: {sorted(extra)[:5]}")
        bad = {v for v in rule.values()} - set(codomain)
        if bad:
            raise ValueError(f"rule values {sorted(bad)} not in codomain alphabet")
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "rule", MappingProxyType(rule))

    @classmethod
    def one_block(cls, domain: Presentation, mapping: Mapping[str, str],
                  codomain=None) -> SlidingBlockCode:
        used = domain.used_symbols
        if codomain is None:
            codomain = tuple(dict.fromkeys(mapping[a] for a in used))
        return cls(domain, 0, 0, {(a,): mapping[a] for a in used}, tuple(codomain))

    @classmethod
    def identity(cls, domain: Presentation) -> SlidingBlockCode:
        return cls.one_block(domain, {a: a for a in domain.alphabet}, domain.alphabet)

    @property
    def window(self) -> int:
        return self.memory + self.anticipation + 1

    @property
    def is_one_block(self) -> bool:
        return self.memory == 0 and self.anticipation == 0

    def symbol_map(self) -> dict[str, str]:
        if not self.is_one_block:
            raise ValueError("symbol_map needs a 1-block code")
        return {k[0]: v for k, v in self.rule.items()}

    def __call__(self, p: LassoPoint) -> LassoPoint:
        return apply(self, p)

    def __repr__(self) -> str:
        return (f"SlidingBlockCode(m={self.memory}, a={self.anticipation}, "
                f"{len(self.rule)} rules, domain={self.domain!r})")

    @cached_property
    def image_presentation(self) -> Presentation:
        return image(self)


@dataclass(frozen=True)
class CodedPair:
    """A point ``x`` of a domain together with a point ``y`` of a codomain."""

    x: LassoPoint
    y: LassoPoint

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, data) -> CodedPair:
        return cls(LassoPoint.from_json(data["x"]), LassoPoint.from_json(data["y"]))


@dataclass(frozen=True)
class Decision:
    """Yes/no answer with an optional witness explaining a no."""

    holds: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.holds


def apply(phi: SlidingBlockCode, p: LassoPoint, check: bool = True) -> LassoPoint:
    """Image point: coordinate ``i`` is ``rule(p[i - m .. i + a])``."""
    if check and not lasso_membership(p, phi.domain):
        raise NotInDomainError(f"{p} is not a point of the domain")
    m, a, rule = phi.memory, phi.anticipation, phi.rule

    def out(i):
        return rule[p.window(i - m, i + a + 1)]

    lo = p.origin - a
    hi = p.end + m
    left = tuple(out(i) for i in range(lo - len(p.left), lo))
    center = tuple(out(i) for i in range(lo, hi))
    right = tuple(out(i) for i in range(hi, hi + len(p.right)))
    return LassoPoint(left, center, right, lo)


def block_presentation(X: Presentation, width: int) -> Presentation:
    """Presentation of the ``width``-th higher block shift of ``X``.

    States pair a state of ``X`` with the last ``width - 1`` symbols read;
    edges are labeled by the block names of ``block_name``.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    if width == 1:
        return X
    layer = {(q, ()) for q in X.states}
    out = {}
    for s, a, t in X.edges:
        out.setdefault(s, []).append((a, t))
    for _ in range(width - 1):
        layer = {(t, w + (a,)) for q, w in layer for a, t in out.get(q, ())}
    edges = []
    blocks = set()
    for q, w in layer:
        for a, t in out.get(q, ()):
            blk = w + (a,)
            blocks.add(blk)
            edges.append((_bstate(q, w), block_name(blk), _bstate(t, blk[1:])))
    names = {block_name(b): b for b in blocks}
    if len(names) != len(blocks):
        raise ValueError("block names collide; symbols must not contain '[', '|' or ']'")
    alphabet = tuple(sorted(names, key=lambda n: _block_order(X, names[n])))
    states = sorted({_bstate(q, w) for q, w in layer})
    return Presentation(alphabet, tuple(states), tuple(edges))


def _bstate(q, w):
    return f"{q}/{'.'.join(w)}"


def _block_order(X, blk):
    return tuple(X.symbol_index[a] for a in blk)


def higher_block(X: Presentation, width: int, memory: int = 0):
    """``(X^[width], conjugacy)`` where the conjugacy reads ``x[i-memory ..]``."""
    if not 0 <= memory < width:
        raise ValueError("memory must lie in [0, width)")
    bp = block_presentation(X, width)
    rule = {w: block_name(w) for w in language(X, width)}
    psi = SlidingBlockCode(X, memory, width - 1 - memory, rule, bp.alphabet)
    return bp, psi


def recode_to_one_block(phi: SlidingBlockCode):
    """``(psi, phi1)`` with ``psi`` a higher block conjugacy and ``phi == phi1 o psi``."""
    if phi.is_one_block:
        return SlidingBlockCode.identity(phi.domain), phi
    bp, psi = higher_block(phi.domain, phi.window, phi.memory)
    rule = {(block_name(w),): v for w, v in phi.rule.items()}
    return psi, SlidingBlockCode(bp, 0, 0, rule, phi.codomain)


def image(phi: SlidingBlockCode) -> Presentation:
    """Presentation of the image shift, on the codomain alphabet.

    For a 1-block code the image graph keeps the states of the domain graph
    in the same order, so state bitsets of both graphs are interchangeable.
    """
    _, one = recode_to_one_block(phi)
    f = one.symbol_map()
    X = one.domain
    return Presentation(phi.codomain, X.states, tuple((s, f[a], t) for s, a, t in X.edges))


def compose(phi2: SlidingBlockCode, phi1: SlidingBlockCode) -> SlidingBlockCode:
    """``phi2 o phi1``: apply ``phi1`` first."""
    if not language_included(image(phi1), phi2.domain):
        raise DomainMismatchError("image of the inner code is not inside the outer domain")
    m = phi1.memory + phi2.memory
    a = phi1.anticipation + phi2.anticipation
    k1, k2 = phi1.window, phi2.window
    rule = {}
    for w in language(phi1.domain, m + a + 1):
        inner = tuple(phi1.rule[w[i:i + k1]] for i in range(k2))
        rule[w] = phi2.rule[inner]
    return SlidingBlockCode(phi1.domain, m, a, rule, phi2.codomain)


def reverse_code(phi: SlidingBlockCode) -> SlidingBlockCode:
    """The same code read right to left, on the reversed domain."""
    rule = {w[::-1]: v for w, v in phi.rule.items()}
    return SlidingBlockCode(reverse(phi.domain), phi.anticipation, phi.memory, rule, phi.codomain)


def reverse_point(p: LassoPoint) -> LassoPoint:
    """``q[i] == p[-i]``."""
    return LassoPoint(p.right[::-1], p.center[::-1], p.left[::-1], -(p.end - 1))


# injectivity -----------------------------------------------------------

def is_injective(phi: SlidingBlockCode) -> Decision:
    """Decide injectivity on points.

    Searches the fiber product of the (1-block recoded) domain graph with
    itself for a bi-infinite path that reads two different symbols somewhere.
    A failing answer carries the two colliding points.
    """
    psi, one = recode_to_one_block(phi)
    X = one.domain
    f = one.symbol_map()
    by_image = {}
    for e in X.edges:
        by_image.setdefault(f[e[1]], []).append(e)
    out = {}
    for group in by_image.values():
        for s, a, t in group:
            for s2, a2, t2 in group:
                out.setdefault((s, s2), []).append(((a, a2), (t, t2)))
    core = _essential_core(out)
    for src in sorted(core):
        for (a, a2), dst in out[src]:
            if a != a2 and dst in core:
                left, center, right = _lasso_through(out, core, src, (a, a2), dst)
                x = LassoPoint(tuple(p[0] for p in left), tuple(p[0] for p in center),
                               tuple(p[0] for p in right), 0)
                x2 = LassoPoint(tuple(p[1] for p in left), tuple(p[1] for p in center),
                                tuple(p[1] for p in right), 0)
                if not psi.is_one_block:
                    x, x2 = unblock(x, psi), unblock(x2, psi)
                return Decision(False, (x, x2))
    return Decision(True)


def unblock(p: LassoPoint, psi: SlidingBlockCode) -> LassoPoint:
    """Invert the higher block conjugacy ``psi`` on a lasso of block symbols."""
    names = {v: k for k, v in psi.rule.items()}
    m = psi.memory

    def sym(blockname):
        return names[blockname][m]

    return p.map_symbols(sym)


def _essential_core(out):
    nodes = set(out)
    for lst in out.values():
        nodes.update(dst for _, dst in lst)
    alive = set(nodes)
    while True:
        has_out = {s for s in alive if any(d in alive for _, d in out.get(s, ()))}
        has_in = {d for s in alive for _, d in out.get(s, ()) if d in alive}
        keep = alive & has_out & has_in
        if keep == alive:
            return alive
        alive = keep


def _lasso_through(out, core, src, label, dst):
    """Labels (left loop, center, right loop) of a bi-infinite path using one edge."""
    inc = {}
    for s, lst in out.items():
        if s not in core:
            continue
        for lab, d in lst:
            if d in core:
                inc.setdefault(d, []).append((lab, s))
    # backwards from src until a node repeats
    seen = {src: 0}
    back = []
    q = src
    while True:
        lab, q = min(inc[q], key=_key)
        back.append(lab)
        if q in seen:
            i = seen[q]
            pre = back[:i][::-1]
            loop = back[i:][::-1]
            break
        seen[q] = len(back)
    seen = {dst: 0}
    fwd = []
    q = dst
    while True:
        lab, q = min(((lb, d) for lb, d in out[q] if d in core), key=_key)
        fwd.append(lab)
        if q in seen:
            i = seen[q]
            return loop, pre + [label] + fwd[:i], fwd[i:]
        seen[q] = len(fwd)


def _key(item):
    return repr(item)


# random points -----------------------------------------------------------

def random_domain_lassos(phi: SlidingBlockCode, count: int, seed: int = 0) -> list[LassoPoint]:
    rng = random.Random(seed)
    return [random_lasso(phi.domain, rng) for _ in range(count)]


def codes_agree(phi1: SlidingBlockCode, phi2: SlidingBlockCode, points) -> bool:
    return all(apply(phi1, p) == apply(phi2, p) for p in points)
