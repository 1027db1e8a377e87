"""Shift spaces as labeled graphs.

A :class:`Presentation` is a finite directed graph whose edges carry symbols.
The shift it presents is the set of label sequences of bi-infinite paths.
Presentations are trimmed to their essential part on construction, so every
finite path label is a word of the shift.

Subsets of states are handled as Python ints used as bitsets.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import AlphabetMismatchError, EmptyShiftError
from .lasso import LassoPoint, Word

Edge = tuple[str, str, str]


def make_alphabet(symbols: Iterable[str]) -> tuple[str, ...]:
    out = tuple(str(s) for s in symbols)
    if not out:
        raise ValueError("alphabet must be nonempty")
    if len(set(out)) != len(out):
        raise ValueError(f"duplicate symbols in alphabet {out}")
    return out


def block_name(word: Sequence[str]) -> str:
    """Symbol name for an overlapping block; 1-blocks keep their own name."""
    word = tuple(word)
    if len(word) == 1:
        return word[0]
    return "[" + "|".join(word) + "]"


def pair_name(a: str, b: str) -> str:
    return f"({a};{b})"


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def advance(table: Sequence[Sequence[int]], mask: int, a: int) -> int:
    """Image of the state set ``mask`` under symbol ``a``."""
    out = 0
    while mask:
        low = mask & -mask
        out |= table[low.bit_length() - 1][a]
        mask ^= low
    return out


def advance_word(table, mask: int, word: Iterable[int]) -> int:
    for a in word:
        if not mask:
            return 0
        mask = advance(table, mask, a)
    return mask


def forward_fixpoint(table, full: int, loop: Sequence[int]) -> int:
    """States ending a left-infinite path labeled ``...loop loop``."""
    mask = full
    while True:
        nxt = advance_word(table, mask, loop)
        if nxt == mask:
            return mask
        mask = nxt


def backward_fixpoint(pred, full: int, loop: Sequence[int]) -> int:
    """States starting a right-infinite path labeled ``loop loop...``."""
    mask = full
    while True:
        nxt = advance_word(pred, mask, reversed(loop))
        if nxt == mask:
            return mask
        mask = nxt


class _Row(dict):
    """Sparse table row: ``row[a]`` is ``0`` for symbols without edges."""

    def __missing__(self, key):
        return 0


@dataclass(frozen=True)
class SftSpec:
    alphabet: tuple[str, ...]
    forbidden: frozenset[Word]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", make_alphabet(self.alphabet))
        words = frozenset(tuple(w) for w in self.forbidden)
        syms = set(self.alphabet)
        for w in words:
            if not w:
                raise ValueError("forbidden words must be nonempty")
            if not set(w) <= syms:
                raise ValueError(f"forbidden word {w} uses symbols outside the alphabet")
        object.__setattr__(self, "forbidden", words)

    @property
    def step(self) -> int:
        return max((len(w) for w in self.forbidden), default=1) - 1

    def avoids(self, word: Sequence[str]) -> bool:
        word = tuple(word)
        return not any(
            word[i:i + len(f)] == f
            for f in self.forbidden
            for i in range(len(word) - len(f) + 1)
        )


@dataclass(frozen=True)
class Presentation:
    """Essential labeled graph over ``alphabet``.

    ``states`` and ``edges`` are normalized on construction: states that lie
    on no bi-infinite path are dropped, edges are sorted, duplicates removed.
    """

    alphabet: tuple[str, ...]
    states: tuple[str, ...]
    edges: tuple[Edge, ...]
    sft: SftSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        alphabet = make_alphabet(self.alphabet)
        sym_set = set(alphabet)
        states = tuple(dict.fromkeys(str(s) for s in self.states))
        known = set(states)
        edges = set()
        for s, a, t in self.edges:
            s, a, t = str(s), str(a), str(t)
            if a not in sym_set:
                raise ValueError(f"edge symbol {a!r} not in alphabet")
            if s not in known or t not in known:
                raise ValueError(f"edge {(s, a, t)} uses an undeclared state")
            edges.add((s, a, t))
        states, edges = _trim(states, edges)
        if not states:
            raise EmptyShiftError("presentation has no bi-infinite path")
        order = {q: i for i, q in enumerate(states)}
        sym_order = {a: i for i, a in enumerate(alphabet)}
        edges = tuple(sorted(edges, key=lambda e: (order[e[0]], sym_order[e[1]], order[e[2]])))
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, alphabet, edges, states=None, sft=None) -> Presentation:
        edges = [tuple(e) for e in edges]
        if states is None:
            states = list(dict.fromkeys(q for s, _, t in edges for q in (s, t)))
        return cls(tuple(alphabet), tuple(states), tuple(edges), sft)

    # indexed views ---------------------------------------------------

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def symbol_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.states)) - 1

    @cached_property
    def succ(self) -> tuple[tuple[int, ...], ...]:
        """``succ[q][a]``: bitset of targets of ``a``-edges leaving ``q``.

        Rows are sparse; absent symbols read as the empty set.
        """
        return self._table(forward=True)

    @cached_property
    def pred(self) -> tuple[tuple[int, ...], ...]:
        return self._table(forward=False)

    def _table(self, forward: bool):
        rows = self.sparse_succ if forward else self.sparse_pred
        return tuple(_Row(r) for r in rows)

    def _sparse(self, forward: bool):
        si, ai = self.state_index, self.symbol_index
        rows = [{} for _ in self.states]
        for s, a, t in self.edges:
            src, dst = (si[s], si[t]) if forward else (si[t], si[s])
            row = rows[src]
            row[ai[a]] = row.get(ai[a], 0) | 1 << dst
        return tuple(tuple(sorted(r.items())) for r in rows)

    @cached_property
    def sparse_succ(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per state, the nonzero ``(symbol, targets)`` entries of ``succ``."""
        return self._sparse(forward=True)

    @cached_property
    def sparse_pred(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        return self._sparse(forward=False)

    @cached_property
    def symbol_reach(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Per symbol, all targets and all sources of its edges."""
        si, ai = self.state_index, self.symbol_index
        tgt, src = [0] * len(self.alphabet), [0] * len(self.alphabet)
        for s, a, t in self.edges:
            tgt[ai[a]] |= 1 << si[t]
            src[ai[a]] |= 1 << si[s]
        return tuple(tgt), tuple(src)

    def moves(self, mask: int, forward: bool = True) -> dict[int, int]:
        """``{a: advance(table, mask, a)}`` over the symbols with a nonempty result."""
        table = self.sparse_succ if forward else self.sparse_pred
        out: dict[int, int] = {}
        while mask:
            low = mask & -mask
            for a, m in table[low.bit_length() - 1]:
                out[a] = out.get(a, 0) | m
            mask ^= low
        return out

    def encode(self, word: Sequence[str]) -> tuple[int, ...] | None:
        """Symbol indices of ``word``; ``None`` if a symbol is foreign."""
        try:
            return tuple(self.symbol_index[a] for a in word)
        except KeyError:
            return None

    def accepts(self, word: Sequence[str]) -> bool:
        """Membership of a finite word in the language of the shift."""
        enc = self.encode(word)
        return enc is not None and advance_word(self.succ, self.full_mask, enc) != 0

    @cached_property
    def used_symbols(self) -> tuple[str, ...]:
        used = {a for _, a, _ in self.edges}
        return tuple(a for a in self.alphabet if a in used)

    def is_deterministic(self) -> bool:
        return all(
            bin(m).count("1") <= 1 for row in self.sparse_succ for _, m in row
        )

    def with_alphabet(self, alphabet) -> Presentation:
        return Presentation(tuple(alphabet), self.states, self.edges, self.sft)

    def __repr__(self) -> str:
        return (f"Presentation({len(self.states)} states, {len(self.edges)} edges, "
                f"alphabet={list(self.alphabet)})")


def _trim(states, edges):
    alive = set(states)
    while True:
        has_out = {s for s, _, t in edges if s in alive and t in alive}
        has_in = {t for s, _, t in edges if s in alive and t in alive}
        keep = alive & has_out & has_in
        if keep == alive:
            break
        alive = keep
    return (tuple(q for q in states if q in alive),
            {e for e in edges if e[0] in alive and e[2] in alive})


# construction --------------------------------------------------------

def from_forbidden(spec: SftSpec) -> Presentation:
    """De Bruijn style presentation of the shift avoiding ``spec.forbidden``.

    States are the allowed words of length ``spec.step``; the edge from ``w``
    labeled ``a`` goes to ``(w + a)[1:]``.
    """
    n = spec.step
    states = [w for w in itertools.product(spec.alphabet, repeat=n) if spec.avoids(w)]
    edges = []
    for w in states:
        for a in spec.alphabet:
            ext = w + (a,)
            if spec.avoids(ext):
                edges.append((_word_state(w), a, _word_state(ext[1:])))
    return Presentation(spec.alphabet, tuple(_word_state(w) for w in states),
                        tuple(edges), spec)


def _word_state(w: Word) -> str:
    return "<" + ",".join(w) + ">"


def full_shift(alphabet) -> Presentation:
    return from_forbidden(SftSpec(tuple(alphabet), frozenset()))


def vertex_shift(alphabet, allowed: Iterable[tuple[str, str]]) -> Presentation:
    """1-step SFT where ``ab`` is allowed iff ``(a, b)`` is listed."""
    alphabet = make_alphabet(alphabet)
    allowed = set(allowed)
    forbidden = frozenset((a, b) for a in alphabet for b in alphabet if (a, b) not in allowed)
    return from_forbidden(SftSpec(alphabet, forbidden))


# languages -------------------------------------------------------------

def language(X: Presentation, n: int) -> set[Word]:
    """All words of length ``n`` occurring in points of ``X``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    layer = {(): X.full_mask}
    for _ in range(n):
        nxt = {}
        for word, mask in layer.items():
            for a, m in X.moves(mask).items():
                nxt[word + (X.alphabet[a],)] = m
        layer = nxt
    return set(layer)


def reverse(X: Presentation) -> Presentation:
    sft = None
    if X.sft is not None:
        sft = SftSpec(X.sft.alphabet, frozenset(w[::-1] for w in X.sft.forbidden))
    return Presentation(X.alphabet, X.states, tuple((t, a, s) for s, a, t in X.edges), sft)


# deterministic automata ----------------------------------------------

@dataclass(frozen=True)
class Dfa:
    """Deterministic automaton for the language of a shift.

    Every state accepts; ``delta[q][a] == -1`` means the word dies.
    State 0 is the start state (follower set of the empty word).
    """

    alphabet: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.delta)

    def run(self, q: int, word: Iterable[int]) -> int:
        for a in word:
            if q < 0:
                break
            q = self.delta[q][a]
        return q

    def minimize(self) -> Dfa:
        cls = [0] * self.size
        while True:
            sig = {}
            new = []
            for q in range(self.size):
                key = (cls[q], tuple(cls[t] if t >= 0 else -1 for t in self.delta[q]))
                new.append(sig.setdefault(key, len(sig)))
            if len(sig) == len(set(cls)):
                break
            cls = new
        # renumber in BFS order from the start state
        order = {}
        queue = deque([cls[0]])
        rep = {}
        for q in range(self.size):
            rep.setdefault(cls[q], q)
        order[cls[0]] = 0
        while queue:
            c = queue.popleft()
            for t in self.delta[rep[c]]:
                if t >= 0 and cls[t] not in order:
                    order[cls[t]] = len(order)
                    queue.append(cls[t])
        delta = [None] * len(order)
        for c, i in order.items():
            delta[i] = tuple(order[cls[t]] if t >= 0 else -1 for t in self.delta[rep[c]])
        return Dfa(self.alphabet, tuple(delta))

    def essential_states(self) -> list[int]:
        alive = set(range(self.size))
        while True:
            out_ok = {q for q in alive if any(t in alive for t in self.delta[q] if t >= 0)}
            in_ok = {t for q in alive for t in self.delta[q] if t in alive}
            keep = alive & out_ok & in_ok
            if keep == alive:
                return sorted(alive)
            alive = keep

    def to_presentation(self) -> Presentation:
        keep = self.essential_states()
        edges = [
            (f"d{q}", self.alphabet[a], f"d{t}")
            for q in keep for a, t in enumerate(self.delta[q]) if t in keep
        ]
        return Presentation(self.alphabet, tuple(f"d{q}" for q in keep), tuple(edges))


def subset_dfa(X: Presentation) -> Dfa:
    """Subset construction started from the set of all states."""
    index = {X.full_mask: 0}
    masks = [X.full_mask]
    delta = []
    i = 0
    while i < len(masks):
        row = [-1] * len(X.alphabet)
        for a, m in X.moves(masks[i]).items():
            if m not in index:
                index[m] = len(masks)
                masks.append(m)
            row[a] = index[m]
        delta.append(tuple(row))
        i += 1
    return Dfa(X.alphabet, tuple(delta))


def minimal_dfa(X: Presentation) -> Dfa:
    return subset_dfa(X).minimize()


def determinize(X: Presentation) -> Presentation:
    """Right-deterministic presentation of the same shift."""
    return subset_dfa(X).to_presentation()


def minimize(X: Presentation) -> Presentation:
    """Deterministic presentation with follower-separated states."""
    return minimal_dfa(X).to_presentation()


def _pair_layers(dfa: Dfa) -> int | None:
    """Least ``k`` such that every word of length ``k`` is focusing.

    Works on unordered pairs of distinct states that read a common word;
    ``None`` when such pairs survive forever (a reachable pair cycle).
    """
    n = dfa.size
    layer = {(p, q) for p in range(n) for q in range(p + 1, n)}
    bound = n * (n - 1) // 2 + 1
    k = 0
    while layer:
        if k > bound:
            return None
        nxt = set()
        for p, q in layer:
            for a in range(len(dfa.alphabet)):
                s, t = dfa.delta[p][a], dfa.delta[q][a]
                if s >= 0 and t >= 0 and s != t:
                    nxt.add((min(s, t), max(s, t)))
        layer = nxt
        k += 1
    return k


def step_of(Y: Presentation) -> int | None:
    """Minimal ``K`` such that ``Y`` is a ``K``-step SFT, or ``None``."""
    return _pair_layers(minimal_dfa(Y))


def is_sft(Y: Presentation) -> bool:
    return step_of(Y) is not None


def language_equal(X: Presentation, Y: Presentation) -> bool:
    return _compare_languages(X, Y, inclusion=False)


def language_included(X: Presentation, Y: Presentation) -> bool:
    """Whether every word of ``X`` is a word of ``Y``."""
    return _compare_languages(X, Y, inclusion=True)


def _compare_languages(X, Y, inclusion):
    if inclusion:
        if not set(X.used_symbols) <= set(Y.alphabet):
            return False
    elif set(X.alphabet) != set(Y.alphabet):
        raise AlphabetMismatchError(f"{X.alphabet} vs {Y.alphabet}")
    to_y = {X.symbol_index[a]: Y.symbol_index[a] for a in X.alphabet if a in Y.symbol_index}
    if not inclusion:
        if set(X.used_symbols) != set(Y.used_symbols):
            return False
    start = (X.full_mask, Y.full_mask)
    seen = {start}
    queue = deque([start])
    while queue:
        s, t = queue.popleft()
        mx, my = X.moves(s), Y.moves(t)
        if not inclusion and len(mx) != len(my):
            return False
        for ax, s2 in mx.items():
            t2 = my.get(to_y.get(ax, -1), 0)
            if not t2:
                return False
            if (s2, t2) not in seen:
                seen.add((s2, t2))
                queue.append((s2, t2))
    return True


# points ----------------------------------------------------------------

def left_config(X: Presentation, p: LassoPoint, upto: int) -> int:
    """States ending a left-infinite path labeled ``p[..upto]``."""
    table = X.succ
    u = X.encode(p.left)
    if u is None:
        return 0
    # base congruent to the origin, so the loop read up to base is u itself
    base = p.origin
    while base > upto + 1:
        base -= len(p.left)
    # targets of the last loop symbol already contain the limit
    mask = forward_fixpoint(table, X.symbol_reach[0][u[-1]], u)
    rest = X.encode(p.window(base, upto + 1))
    if rest is None:
        return 0
    return advance_word(table, mask, rest)


def right_config(X: Presentation, p: LassoPoint, start: int) -> int:
    """States starting a right-infinite path labeled ``p[start..]``."""
    table = X.pred
    v = X.encode(p.right)
    if v is None:
        return 0
    base = p.end
    while base < start:
        base += len(p.right)
    mask = backward_fixpoint(table, X.symbol_reach[1][v[0]], v)
    rest = X.encode(p.window(start, base))
    if rest is None:
        return 0
    return advance_word(table, mask, reversed(rest))


def lasso_membership(p: LassoPoint, X: Presentation) -> bool:
    """Whether the eventually periodic point ``p`` lies in the shift of ``X``."""
    left = left_config(X, p, p.origin - 1)
    if not left:
        return False
    right = right_config(X, p, p.origin)
    return bool(left & right)


# random sampling --------------------------------------------------------

def _out_edges(X: Presentation):
    out = {q: [] for q in X.states}
    for s, a, t in X.edges:
        out[s].append((a, t))
    return out


def _walk_to_cycle(out, start, choose):
    """Walk from ``start`` until a state repeats; return (prefix, loop) labels."""
    seen = {start: 0}
    labels = []
    q = start
    while True:
        a, q = choose(out[q])
        labels.append(a)
        if q in seen:
            i = seen[q]
            return labels[:i], labels[i:], q
        seen[q] = len(labels)


def random_lasso(X: Presentation, rng: random.Random, center_len: int = 4,
                 origin_spread: int = 3) -> LassoPoint:
    """Random eventually periodic point of ``X``."""
    out = _out_edges(X)
    choose = rng.choice
    q = rng.choice(X.states)
    _, loop, q = _walk_to_cycle(out, q, choose)
    # rotate so the loop ends at state q: walk_to_cycle already returns that
    center = []
    for _ in range(rng.randint(0, center_len)):
        a, q = choose(out[q])
        center.append(a)
    prefix, right, _ = _walk_to_cycle(out, q, choose)
    origin = rng.randint(-origin_spread - len(center), origin_spread)
    return LassoPoint(tuple(loop), tuple(center + prefix), tuple(right), origin)


def some_right_ray(X: Presentation, mask: int, labels=None):
    """Labels ``(prefix, loop)`` of a right-infinite path from a state in ``mask``.

    ``labels`` optionally maps each edge symbol to the label reported.
    """
    q = X.states[next(iter_bits(mask))]
    out = _out_edges(X)
    prefix, loop, _ = _walk_to_cycle(out, q, lambda opts: opts[0])
    if labels is not None:
        prefix = [labels[a] for a in prefix]
        loop = [labels[a] for a in loop]
    return tuple(prefix), tuple(loop)
