"""Deciders for eresolving, retract and right continuing properties.

All deciders take a 1-block code ``phi`` on a presentation ``X``.  The image
presentation ``Y`` is the graph of ``X`` relabeled by ``phi``; it shares the
states of ``X``, so one bitset describes a set of states of either graph.

Retract checking works on *configurations* ``(T, P)``: for a left ray ``l``
of ``X``, ``T`` is the set of states ending a left-infinite path labeled
``l`` and ``P`` the set of states ending a left-infinite path of ``Y`` labeled
``phi(l)``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from math import lcm

import numpy as np

from . import _kernels
from .codes import (
    CodedPair,
    Decision,
    SlidingBlockCode,
    apply,
    block_presentation,
    recode_to_one_block,
    reverse_code,
    unblock,
)
from .errors import NotApplicableError, PreconditionError
from .lasso import LassoPoint
from .shifts import (
    Presentation,
    advance,
    advance_word,
    forward_fixpoint,
    is_sft,
    iter_bits,
    language,
    lasso_membership,
    left_config,
    right_config,
    some_right_ray,
    step_of,
)


@dataclass(frozen=True)
class RetractVerdict:
    holds: bool
    n: int
    witness: CodedPair | None = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self) -> dict:
        out = {"property": "retract", "holds": self.holds, "n": self.n}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


@dataclass(frozen=True)
class KBoundReport:
    R: int
    d: int
    K: int
    actualStep: int | None
    isSftConfirmed: bool

    @property
    def gap(self) -> int | None:
        return None if self.actualStep is None else self.K - self.actualStep

    @property
    def ok(self) -> bool:
        return self.isSftConfirmed and self.actualStep is not None and self.actualStep <= self.K

    def to_json(self) -> dict:
        return {"R": self.R, "d": self.d, "K": self.K, "actualStep": self.actualStep,
                "isSftConfirmed": self.isSftConfirmed, "gap": self.gap}


def _require_one_block(phi: SlidingBlockCode):
    if not phi.is_one_block:
        raise PreconditionError("a 1-block code is required; use recode_to_one_block first")


# eresolving ------------------------------------------------------------

def is_right_eresolving(phi: SlidingBlockCode) -> Decision:
    """Every image 2-block ``b0 b1`` lifts one step from every preimage of ``b0``.

    A failing answer carries ``(a0, (b0, b1))``.
    """
    _require_one_block(phi)
    f = phi.symbol_map()
    b1x = sorted(language(phi.domain, 1), key=phi.domain.encode)
    b2x = language(phi.domain, 2)
    Y = phi.image_presentation
    b2y = sorted(language(Y, 2), key=Y.encode)
    follow = {}
    for a0, a1 in b2x:
        follow.setdefault(a0, set()).add(f[a1])
    for (a0,) in b1x:
        for b0, b1 in b2y:
            if b0 == f[a0] and b1 not in follow.get(a0, ()):
                return Decision(False, (a0, (b0, b1)))
    return Decision(True)


def is_left_eresolving(phi: SlidingBlockCode) -> Decision:
    return is_right_eresolving(reverse_code(phi))


# retract ----------------------------------------------------------------

class RetractAnalysis:
    """Configuration graphs behind :func:`check_retract` for one code."""

    def __init__(self, phi: SlidingBlockCode):
        _require_one_block(phi)
        self.phi = phi
        self.X = phi.domain
        self.Y = phi.image_presentation
        f = phi.symbol_map()
        self.f = [self.Y.symbol_index[f[a]] if a in f else -1 for a in self.X.alphabet]
        self.symbols = [a for a in range(len(self.X.alphabet)) if self.f[a] >= 0]
        self._build_configs()
        self._layers = [{(t, t, p): None for t, p in self.seeds}]
        self._fail_memo = {}
        self._explored = set()
        self._unsafe = set()
        self._rev = {}
        self._nmax = None

    # configuration automaton

    def _moves(self, z):
        """``{c: D(z, c)}`` for the domain symbols readable from ``z``."""
        my = self.Y.moves(z[1])
        f = self.f
        return {c: (t, my[f[c]]) for c, t in self.X.moves(z[0]).items() if f[c] >= 0}

    def _build_configs(self):
        start = (self.X.full_mask, self.Y.full_mask)
        out = {start: None}
        queue = deque([start])
        order = [start]
        while queue:
            z = queue.popleft()
            edges = self._moves(z)
            for z2 in edges.values():
                if z2 not in out:
                    out[z2] = None
                    order.append(z2)
                    queue.append(z2)
            out[z] = edges
        self.start = start
        self.graph = out
        preds = {z: [] for z in order}
        for z in order:
            for c, z2 in out[z].items():
                preds[z2].append((c, z))
        self.preds = preds
        # states with an infinite past
        alive = set(order)
        while True:
            keep = {z for z in alive if any(p in alive for _, p in preds[z])}
            if keep == alive:
                break
            alive = keep
        self.cyclic = alive
        # left-ray configurations: D(I, w) == D(y, w) == z for a cyclic y.
        # D(y, w) is contained in D(I, w), so the second component drives the search.
        # D(y, w) grows with y, so only inclusion-maximal cyclic y are needed.
        parent = {}
        queue = deque()
        for y in _maximal(alive, order):
            pair = (start, y)
            parent[pair] = None
            queue.append(pair)
        realized = {}
        while queue:
            pair = queue.popleft()
            z1, z2 = pair
            if z1 == z2:
                realized.setdefault(z1, pair)
            edges1 = out[z1]
            for c, n2 in out[z2].items():
                nxt = (edges1[c], n2)
                if nxt not in parent:
                    parent[nxt] = (pair, c)
                    queue.append(nxt)
        self._pair_parent = parent
        self._realized = realized
        rank = {z: i for i, z in enumerate(order)}
        self.seeds = sorted(realized, key=rank.__getitem__)

    def left_ray(self, z):
        """``(loop, prefix)`` symbol indices of a left ray with configuration ``z``."""
        pair = self._realized[z]
        w = []
        while self._pair_parent[pair] is not None:
            pair, c = self._pair_parent[pair]
            w.append(c)
        w.reverse()
        y = pair[1]
        # walk backwards inside the cyclic part until a state repeats
        seen = {y: 0}
        back = []
        q = y
        while True:
            c, q = next((c, p) for c, p in self.preds[q] if p in self.cyclic)
            back.append(c)
            if q in seen:
                i = seen[q]
                return back[i:][::-1], back[:i][::-1] + w
            seen[q] = len(back)

    # layers of (T, S, P) triples

    def _triple_moves(self, trip):
        t, s, p = trip
        ms, mp = self.Y.moves(s), self.Y.moves(p)
        f = self.f
        for c, t2 in self.X.moves(t).items():
            b = f[c]
            if b >= 0:
                yield c, (t2, ms.get(b, 0), mp[b])

    def _layer(self, n):
        while len(self._layers) <= n:
            nxt = {}
            for trip in self._layers[-1]:
                for c, key in self._triple_moves(trip):
                    if key not in nxt:
                        nxt[key] = (trip, c)
            self._layers.append(nxt)
        return self._layers[n]

    def _mark_unsafe(self, pair):
        stack = [pair]
        while stack:
            cur = stack.pop()
            if cur in self._unsafe:
                continue
            self._unsafe.add(cur)
            stack.extend(self._rev.get(cur, ()))

    def _explore(self, start):
        """Extend the safety graph on ``(S, P)`` pairs from ``start``.

        A pair is unsafe when some image word is readable from ``P`` but not
        from ``S``.  Unsafety is propagated backwards as the graph grows.
        """
        if start in self._explored:
            return
        self._explored.add(start)
        stack = [start]
        while stack:
            cur = stack.pop()
            ms = self.Y.moves(cur[0])
            for b, p2 in self.Y.moves(cur[1]).items():
                s2 = ms.get(b, 0)
                if not s2:
                    self._mark_unsafe(cur)
                    continue
                nxt = (s2, p2)
                self._rev.setdefault(nxt, []).append(cur)
                if nxt in self._unsafe:
                    self._mark_unsafe(cur)
                if nxt not in self._explored:
                    self._explored.add(nxt)
                    stack.append(nxt)

    def failing_word(self, s, p):
        """Shortest image word readable after ``p`` but not after ``s``."""
        key = (s, p)
        if key in self._fail_memo:
            return self._fail_memo[key]
        self._explore(key)
        if key not in self._unsafe:
            self._fail_memo[key] = None
            return None
        seen = {key: None}
        queue = deque([key])
        found = None
        while queue and found is None:
            cur = queue.popleft()
            ms = self.Y.moves(cur[0])
            for b, p2 in sorted(self.Y.moves(cur[1]).items()):
                s2 = ms.get(b, 0)
                if not s2:
                    found = (cur, b)
                    break
                nxt = (s2, p2)
                if nxt not in seen:
                    seen[nxt] = (cur, b)
                    queue.append(nxt)
        word = None
        if found is not None:
            cur, b = found
            word = [b]
            while seen[cur] is not None:
                cur, b0 = seen[cur]
                word.append(b0)
            word.reverse()
        self._fail_memo[key] = word
        return word

    def verdict(self, n: int) -> RetractVerdict:
        layer = self._layer(n)
        for trip in layer:
            word = self.failing_word(trip[1], trip[2])
            if word is not None:
                return RetractVerdict(False, n, self._witness(n, trip, word))
        return RetractVerdict(True, n)

    def _witness(self, n, trip, word):
        s = []
        cur = trip
        for k in range(n, 0, -1):
            cur, c = self._layers[k][cur]
            s.append(c)
        s.reverse()
        seed = (cur[0], cur[2])
        loop, prefix = self.left_ray(seed)
        X, Y = self.X, self.Y
        xa, ya = X.alphabet, Y.alphabet
        past = prefix + s
        t_end = trip[0]
        xpre, xloop = some_right_ray(X, t_end)
        p_end = advance_word(Y.succ, trip[2], word)
        ypre, yloop = some_right_ray(Y, p_end)
        origin = 1 - len(past)
        x = LassoPoint(tuple(xa[c] for c in loop), tuple(xa[c] for c in past) + xpre,
                       xloop, origin)
        y = LassoPoint(tuple(ya[self.f[c]] for c in loop),
                       tuple(ya[self.f[c]] for c in past) + tuple(ya[b] for b in word) + ypre,
                       yloop, origin)
        return CodedPair(x, y)

    def reachable_triples(self) -> int:
        if self._nmax is None:
            seen = set(self._layers[0])
            queue = deque(seen)
            while queue:
                for _, key in self._triple_moves(queue.popleft()):
                    if key not in seen:
                        seen.add(key)
                        queue.append(key)
            self._nmax = len(seen)
        return self._nmax


def _maximal(configs, order):
    """Inclusion-maximal elements of ``configs``, in ``order``."""
    items = [z for z in order if z in configs]
    # anything dominated is dominated by a maximal element, so larger sets go first
    by_size = sorted(items, key=lambda z: -(z[0].bit_count() + z[1].bit_count()))
    kept = set()
    holders = {}  # state bit -> kept configurations whose first set contains it
    for z in by_size:
        t, p = z
        low = (t & -t).bit_length()
        if not any(t & k[0] == t and p & k[1] == p for k in holders.get(low, ())):
            kept.add(z)
            for q in iter_bits(t):
                holders.setdefault(q + 1, []).append(z)
    return [z for z in items if z in kept]


@lru_cache(maxsize=256)
def analysis(phi: SlidingBlockCode) -> RetractAnalysis:
    return RetractAnalysis(phi)


@lru_cache(maxsize=256)
def _one_block(phi: SlidingBlockCode):
    return recode_to_one_block(phi)


def check_retract(phi: SlidingBlockCode, n: int) -> RetractVerdict:
    """Decide whether ``phi`` lifts with agreement on coordinates ``<= -n``.

    For all ``x`` in the domain and ``y`` in the image with ``phi(x)`` and
    ``y`` agreeing on coordinates ``<= 0``, is there ``x'`` with
    ``phi(x') == y`` and ``x'`` agreeing with ``x`` on coordinates ``<= -n``?

    Codes with a larger window are decided on their 1-block recoding, where
    agreement up to ``-n`` in the original coordinates is agreement of blocks
    up to ``-(n + anticipation)``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if phi.is_one_block:
        return analysis(phi).verdict(n)
    psi, one = _one_block(phi)
    v = analysis(one).verdict(n + phi.anticipation)
    if v.holds:
        return RetractVerdict(True, n)
    w = v.witness
    return RetractVerdict(False, n, CodedPair(unblock(w.x, psi), w.y))


def check_left_retract(phi: SlidingBlockCode, n: int) -> RetractVerdict:
    """The mirror property, through the reversed code."""
    return check_retract(reverse_code(phi), n)


def minimal_retract(phi: SlidingBlockCode) -> int | None:
    """Least ``n`` with :func:`check_retract` true, or ``None`` if there is none."""
    if not phi.is_one_block:
        r = minimal_retract(_one_block(phi)[1])
        return None if r is None else max(0, r - phi.anticipation)
    an = analysis(phi)
    # verdicts are monotone in n and the triple layers repeat within this many steps
    for n in range(an.reachable_triples() + 1):
        if an.verdict(n).holds:
            return n
    return None


def minimal_left_retract(phi: SlidingBlockCode) -> int | None:
    return minimal_retract(reverse_code(phi))


def retract_counterexample(phi: SlidingBlockCode, n: int, x: LassoPoint, y: LassoPoint) -> bool:
    """Whether the concrete pair ``(x, y)`` refutes retract ``n``."""
    if not phi.is_one_block:
        psi, one = _one_block(phi)
        if not lasso_membership(x, phi.domain):
            return False
        return retract_counterexample(one, n + phi.anticipation, apply(psi, x), y)
    X, Y = phi.domain, phi.image_presentation
    if not lasso_membership(x, X) or not lasso_membership(y, Y):
        return False
    if not apply(phi, x, check=False).agrees_left_of(y, 0):
        return False
    return not (left_config(X, x, -n) & right_config(Y, y, 1 - n))


def continuing_counterexample(phi: SlidingBlockCode, x: LassoPoint, y: LassoPoint) -> bool:
    """Whether ``(x, y)`` refutes right continuing.

    Requires ``phi(x)`` and ``y`` to agree on coordinates ``<= 0``; the pair
    refutes when no point left asymptotic to ``x`` maps onto ``y``.
    """
    _require_one_block(phi)
    X, Y = phi.domain, phi.image_presentation
    if not lasso_membership(x, X) or not lasso_membership(y, Y):
        return False
    if not apply(phi, x, check=False).agrees_left_of(y, 0):
        return False
    n0 = max(0, 1 - x.origin, 1 - y.origin)
    period = lcm(len(x.left), len(y.left))
    seen = set()
    n = 0
    while True:
        r = right_config(Y, y, 1 - n)
        if left_config(X, x, -n) & r:
            return False
        if n >= n0:
            key = (n % period, r)
            if key in seen:
                return True
            seen.add(key)
        n += 1


def is_right_continuing_sft(phi: SlidingBlockCode) -> bool:
    """Right continuing test for codes whose domain is an SFT.

    On SFT domains right continuing is equivalent to having a retract.
    """
    _require_one_block(phi)
    if not is_sft(phi.domain):
        raise NotApplicableError("domain is not an SFT; only bounded refutation is available")
    return minimal_retract(phi) is not None


# step bound for images of codes with a retract -----------------------

def one_step_form(phi: SlidingBlockCode) -> SlidingBlockCode:
    """Recode so the domain is a 1-step SFT graph and the code is 1-block."""
    N = step_of(phi.domain)
    if N is None:
        raise PreconditionError("domain is not an SFT")
    width = max(N, phi.window)
    if width <= 1:
        return phi
    bp = block_presentation(phi.domain, width)
    names = {}
    for w in language(phi.domain, width):
        names[_block_label(w)] = phi.rule[w[:phi.window]]
    rule = {(a,): names[a] for a in bp.used_symbols}
    return SlidingBlockCode(bp, 0, 0, rule, phi.codomain)


def _block_label(w):
    from .shifts import block_name
    return block_name(w)


def verify_step_bound(phi: SlidingBlockCode) -> KBoundReport:
    """Check that the image of a right continuing code on an SFT is a K-step SFT.

    ``K = |B_1(X)|**2 + 1 + R + 1`` where ``R`` is the minimal retract of the
    1-block, 1-step recoding.
    """
    one = one_step_form(phi)
    R = minimal_retract(one)
    if R is None:
        raise PreconditionError("code has no retract, so it is not right continuing")
    d = len(language(one.domain, 1)) ** 2 + 1
    K = d + R + 1
    Y = one.image_presentation
    step = step_of(Y)
    return KBoundReport(R, d, K, step, step is not None)


# brute-force oracle ----------------------------------------------------

def _lasso_words(alphabet_idx, total):
    """All ``(loop, word)`` pairs with ``1 <= len(loop)`` and combined length ``<= total``."""
    rows = []
    for t in range(1, total + 1):
        for k in range(1, t + 1):
            for loop in itertools.product(alphabet_idx, repeat=k):
                for word in itertools.product(alphabet_idx, repeat=t - k):
                    rows.append((loop, word))
    return rows


@lru_cache(maxsize=32)
def _lasso_batch(alphabet_idx: tuple, total: int, swap: bool):
    """Encoded :func:`_lasso_words`; ``swap`` puts the word before the loop."""
    rows = _lasso_words(alphabet_idx, total)
    if swap:
        rows = [(w, loop) for loop, w in rows]
    return rows, _kernels.encode_batch(rows)


@lru_cache(maxsize=64)
def _domain_left_masks(X: Presentation, L: int) -> np.ndarray:
    """Left ray configurations in ``X``; shared by every code on ``X``."""
    xs = tuple(X.symbol_index[a] for a in X.used_symbols)
    _, (words, ul, wl) = _lasso_batch(xs, L, False)
    return _kernels.left_masks(_kernels.table_array(X.succ, len(X.alphabet)), words, ul, wl)


@dataclass
class _OracleTables:
    phi: SlidingBlockCode
    L: int
    lefts: list = field(default_factory=list)
    left_T: np.ndarray = None
    left_P: np.ndarray = None
    tails: list = field(default_factory=list)
    tail_R: np.ndarray = None
    # first row index for each distinct left (T, P) and each distinct tail R
    groups: dict = field(default_factory=dict)
    tail_first: dict = field(default_factory=dict)


@lru_cache(maxsize=64)
def _oracle_tables(phi: SlidingBlockCode, L: int) -> _OracleTables:
    X, Y = phi.domain, phi.image_presentation
    f = phi.symbol_map()
    fidx = np.array([Y.symbol_index[f[a]] if a in f else 0 for a in X.alphabet], dtype=np.int64)
    xs = tuple(X.symbol_index[a] for a in X.used_symbols)
    lefts, (words, ul, wl) = _lasso_batch(xs, L, False)
    T = _domain_left_masks(X, L)
    P = _kernels.left_masks(_kernels.table_array(Y.succ, len(Y.alphabet)), fidx[words], ul, wl)
    ys = tuple(Y.symbol_index[b] for b in Y.used_symbols)
    tails, (words, rl, vl) = _lasso_batch(ys, L, True)
    R = _kernels.right_masks(_kernels.table_array(Y.pred, len(Y.alphabet)), words, rl, vl)
    groups = {k: i for k, i in _first_pairs(T, P, len(Y.states)).items() if k[0]}
    tail_first = _first_rows(R)
    return _OracleTables(phi, L, lefts, T, P, tails, R, groups, tail_first)


def _first_rows(keys: np.ndarray) -> dict:
    """``{key: index of its first occurrence}``, ordered by that index."""
    _, idx = np.unique(keys, return_index=True)
    idx.sort()
    return dict(zip(keys[idx].tolist(), idx.tolist()))


def _first_pairs(T: np.ndarray, P: np.ndarray, p_bits: int) -> dict:
    """:func:`_first_rows` keyed by ``(T[i], P[i])``."""
    if T.size == 0:
        return {}
    if int(T.max()).bit_length() + p_bits <= 63:
        _, idx = np.unique((T << p_bits) | P, return_index=True)
    else:
        _, idx = np.unique(np.stack([T, P], axis=1), axis=0, return_index=True)
    idx.sort()
    return dict(zip(zip(T[idx].tolist(), P[idx].tolist()), idx.tolist()))


def oracle_retract(phi: SlidingBlockCode, n: int, L: int = 6) -> RetractVerdict:
    """Brute-force search for a counterexample to retract ``n``.

    Enumerates left rays ``u^inf w`` with ``|u| + |w| <= L``, every
    continuation ``s`` of length ``n``, and image tails ``r v^inf`` with
    ``|r| + |v| <= L``.  For each concrete pair, whether a lift exists is
    decided exactly from the points themselves.  Finding nothing is only
    evidence, not proof.
    """
    _require_one_block(phi)
    X, Y = phi.domain, phi.image_presentation
    tab = _oracle_tables(phi, L)
    f = phi.symbol_map()
    fi = {X.symbol_index[a]: Y.symbol_index[f[a]] for a in X.used_symbols}
    xs = [X.symbol_index[a] for a in X.used_symbols]

    after = {}
    for s in itertools.product(xs, repeat=n):
        img = [fi[c] for c in s]
        for (t, p), i in tab.groups.items():
            if not advance_word(X.succ, t, s):
                continue
            key = (advance_word(Y.succ, t, img), advance_word(Y.succ, p, img))
            after.setdefault(key, (i, s))
    for (s_mask, p_mask), (i, s) in after.items():
        for r, j in tab.tail_first.items():
            if p_mask & r and not s_mask & r:
                return RetractVerdict(False, n, _oracle_pair(phi, tab.lefts[i], s, tab.tails[j]))
    return RetractVerdict(True, n)


def _oracle_pair(phi, left, s, tail):
    X, Y = phi.domain, phi.image_presentation
    f = phi.symbol_map()
    loop, w = left
    past = list(w) + list(s)
    xa, ya = X.alphabet, Y.alphabet
    t = advance_word(X.succ, forward_fixpoint(X.succ, X.full_mask, loop), past)
    pre, cyc = some_right_ray(X, t)
    origin = 1 - len(past)
    x = LassoPoint(tuple(xa[c] for c in loop), tuple(xa[c] for c in past) + pre, cyc, origin)
    r, v = tail
    y = LassoPoint(tuple(f[xa[c]] for c in loop),
                   tuple(f[xa[c]] for c in past) + tuple(ya[b] for b in r),
                   tuple(ya[b] for b in v), origin)
    return CodedPair(x, y)


def refute_right_continuing_bounded(phi: SlidingBlockCode, L: int = 4) -> CodedPair | None:
    """Search small lasso pairs for a refutation of right continuing.

    Returns ``(x, y)`` with ``phi(x)`` agreeing with ``y`` on coordinates
    ``<= 0`` such that no point left asymptotic to ``x`` maps onto ``y``.
    ``None`` means nothing was found up to size ``L``; it proves nothing.
    """
    _require_one_block(phi)
    X, Y = phi.domain, phi.image_presentation
    tab = _oracle_tables(phi, L)
    f = phi.symbol_map()
    fi = [Y.symbol_index[f[a]] if a in f else -1 for a in X.alphabet]
    tails = {}
    for j, r in enumerate(tab.tail_R.tolist()):
        tails.setdefault(r, j)
    for i, ((loop, w), t, p) in enumerate(zip(tab.lefts, tab.left_T.tolist(), tab.left_P.tolist())):
        if not t:
            continue
        g = forward_fixpoint(X.succ, X.full_mask, loop)
        for r0, j in tails.items():
            if p & r0 and _no_lift(X, Y, fi, loop, w, g, r0):
                return _oracle_pair(phi, (loop, w), (), tab.tails[j])
    return None


def _no_lift(X, Y, fi, loop, w, g, r):
    """No ``n`` admits a lift agreeing with ``u^inf w`` left of ``-n``."""
    k = len(loop)
    seen = set()
    n = 0
    while True:
        if n <= len(w):
            t = advance_word(X.succ, g, w[:len(w) - n])
        else:
            j = (n - len(w)) % k
            t = advance_word(X.succ, g, loop[:k - j]) if j else g
        if t & r:
            return False
        if n >= len(w):
            key = ((n - len(w)) % k, r)
            if key in seen:
                return True
            seen.add(key)
        sym = w[len(w) - 1 - n] if n < len(w) else loop[(k - 1 - (n - len(w))) % k]
        r = advance(Y.pred, r, fi[sym])
        n += 1
