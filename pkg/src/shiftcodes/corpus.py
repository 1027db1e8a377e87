"""Bundled example shifts and codes, plus seeded random instances."""

from __future__ import annotations

import itertools
import random

import numpy as np

from .codes import SlidingBlockCode
from .constructions import build_sofic_example, min_code, noncontinuing_example, sqrt_construction, xor_code
from .documents import CodeDocument, ShiftDocument
from .errors import EmptyShiftError
from .shifts import Presentation, SftSpec, from_forbidden, full_shift, make_alphabet, vertex_shift


def golden_mean() -> Presentation:
    return from_forbidden(SftSpec(("0", "1"), frozenset({("1", "1")})))


def even_shift() -> Presentation:
    """Blocks of 1s separated by even runs of 0s; not of finite type."""
    return Presentation.from_edges(("0", "1"), [("p", "1", "p"), ("p", "0", "q"), ("q", "0", "p")])


def _examples():
    X3, Y3, phi3 = build_sofic_example()
    nc = noncontinuing_example()
    full2 = full_shift(("0", "1"))
    return {
        "sofic-x": X3,
        "sofic-y": Y3,
        "sofic-code": phi3,
        "golden-mean": golden_mean(),
        "even-shift": even_shift(),
        "full2": full2,
        "identity-full2": SlidingBlockCode.identity(full2),
        "identity-golden-mean": SlidingBlockCode.identity(golden_mean()),
        "min-code": min_code(),
        "xor-code": xor_code(),
        "noncontinuing": nc,
        "sqrt-sofic": sqrt_construction(phi3).sqrtPhi,
        "sqrt-noncontinuing": sqrt_construction(nc).sqrtPhi,
        "sqrt-identity": sqrt_construction(SlidingBlockCode.identity(full_shift(("0",)))).sqrtPhi,
    }


EXAMPLE_NAMES = tuple(_examples())


def example(name: str):
    """The named shift (a :class:`Presentation`) or code."""
    table = _examples()
    if name not in table:
        raise KeyError(name)
    return table[name]


def example_document(name: str) -> dict:
    obj = example(name)
    if isinstance(obj, SlidingBlockCode):
        return CodeDocument.from_code(obj).to_json()
    return ShiftDocument.from_presentation(obj).to_json()


# random instances ------------------------------------------------------------

def symbol_names(k: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(k)) if k <= 10 else tuple(f"s{i}" for i in range(k))


def random_one_step_sft(rng: random.Random, symbols: int, density: float = 0.35,
                        tries: int = 1000) -> Presentation:
    """A 1-step SFT on ``symbols`` symbols that uses all of them.

    Each 2-block is forbidden independently with probability ``density``;
    draws whose shift is empty or misses a symbol are rejected.
    """
    alphabet = symbol_names(symbols)
    for _ in range(tries):
        forbidden = frozenset((a, b) for a in alphabet for b in alphabet if rng.random() < density)
        try:
            X = from_forbidden(SftSpec(alphabet, forbidden))
        except EmptyShiftError:
            continue
        if len(X.used_symbols) == symbols:
            return X
    raise RuntimeError("could not draw a shift using every symbol")  # pragma: no cover


def random_graph(rng: random.Random, states: int, symbols: int, tries: int = 1000) -> Presentation:
    """An essential labeled graph; each (state, state, symbol) edge is present with probability 1/3.

    Draws whose essential part is empty are rejected; states outside the
    essential part are dropped.
    """
    alphabet = symbol_names(symbols)
    names = tuple(f"q{i}" for i in range(states))
    for _ in range(tries):
        edges = [(s, a, t) for s in names for a in alphabet for t in names if rng.random() < 1 / 3]
        try:
            return Presentation(alphabet, names, tuple(edges))
        except EmptyShiftError:
            continue
    raise RuntimeError("could not draw a nonempty graph")  # pragma: no cover


def random_one_block(rng: random.Random, X: Presentation, symbols: int) -> SlidingBlockCode:
    """A 1-block code sending each used symbol to one of ``symbols`` image symbols, uniformly."""
    image = symbol_names(symbols)
    mapping = {a: rng.choice(image) for a in X.used_symbols}
    codomain = make_alphabet(sorted(set(mapping.values()), key=image.index))
    return SlidingBlockCode.one_block(X, mapping, codomain)


# exhaustive small family ------------------------------------------------------

def _canonical_tables(k: int, m: int) -> np.ndarray:
    """One transition table per isomorphism class of right-resolving graphs.

    A table has shape ``(k, m)`` with entries a target state or ``-1``.  Tables
    are numbered in base ``k + 1``; a class is represented by its smallest
    number over all state and symbol permutations.
    """
    base, cells = k + 1, k * m
    idx = np.arange(base ** cells, dtype=np.int64)
    weights = base ** np.arange(cells, dtype=np.int64)
    tables = ((idx[:, None] // weights) % base - 1).reshape(-1, k, m)
    best = idx.copy()
    new = np.empty_like(tables)
    for sp in itertools.permutations(range(k)):
        relabeled = np.array(sp + (-1,))[tables]  # -1 stays -1
        rows = np.array(sp)[:, None]
        for ap in itertools.permutations(range(m)):
            new[:, rows, np.array(ap)[None, :]] = relabeled
            key = ((new.reshape(len(idx), cells) + 1) * weights).sum(axis=1)
            np.minimum(best, key, out=best)
    return tables[best == idx]


def small_presentations(max_states: int = 3, max_symbols: int = 3):
    """Every right-resolving essential presentation with at most ``max_states``
    states and ``max_symbols`` symbols, one per isomorphism class.

    Graphs that lose a state to trimming or leave a symbol unused are
    skipped; they are isomorphic to a smaller member.
    """
    out = []
    for k in range(1, max_states + 1):
        states = tuple(f"q{q}" for q in range(k))
        for m in range(1, max_symbols + 1):
            alphabet = symbol_names(m)
            for tab in _canonical_tables(k, m).tolist():
                edges = [(states[q], alphabet[a], states[tab[q][a]])
                         for q in range(k) for a in range(m) if tab[q][a] >= 0]
                try:
                    X = Presentation(alphabet, states, tuple(edges))
                except EmptyShiftError:
                    continue
                if len(X.states) == k and len(X.used_symbols) == m:
                    out.append(X)
    return out


def small_vertex_shifts(max_symbols: int = 3):
    """Every vertex shift on at most ``max_symbols`` symbols that uses all of
    them, one per symbol permutation class."""
    out = []
    for m in range(1, max_symbols + 1):
        alphabet = symbol_names(m)
        pairs = [(a, b) for a in range(m) for b in range(m)]
        seen = set()
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            allowed = frozenset(p for p, on in zip(pairs, bits) if on)
            key = min(tuple(sorted((perm[a], perm[b]) for a, b in allowed))
                      for perm in itertools.permutations(range(m)))
            if key in seen:
                continue
            seen.add(key)
            try:
                X = vertex_shift(alphabet, [(alphabet[a], alphabet[b]) for a, b in allowed])
            except EmptyShiftError:
                continue
            if len(X.used_symbols) == m:
                out.append(X)
    return out


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]


def one_block_codes(X: Presentation):
    """Every 1-block code on ``X``, up to renaming of the image symbols."""
    for blocks in _set_partitions(list(X.used_symbols)):
        mapping = {a: str(i) for i, blk in enumerate(blocks) for a in blk}
        yield SlidingBlockCode.one_block(X, mapping, symbol_names(len(blocks)))
