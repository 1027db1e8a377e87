"""Explicit constructions: a right continuing code without a retract, the
spacer ("square root") construction, and the retract-zero recodings."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .codes import (
    CodedPair,
    SlidingBlockCode,
    apply,
    image,
    is_injective,
    random_domain_lassos,
)
from .errors import PreconditionError
from .lasso import LassoPoint
from .resolving import (
    check_left_retract,
    check_retract,
    minimal_left_retract,
    minimal_retract,
)
from .shifts import (
    Presentation,
    block_name,
    full_shift,
    language,
    language_equal,
    lasso_membership,
    make_alphabet,
    pair_name,
    vertex_shift,
)

BAR1 = "1bar"


# a right continuing code with no retract ----------------------------------

def build_sofic_example():
    """``(X, Y, phi)``: ``X`` forbids ``1bar 2^n 3`` for all ``n >= 0``.

    State ``B`` remembers that a ``1bar`` was read and only ``2`` since.
    ``phi`` merges ``1`` and ``1bar`` onto the full shift on ``{1, 2, 3}``.
    """
    X = Presentation.from_edges(
        ("1", BAR1, "2", "3"),
        [("A", "1", "A"), ("A", "2", "A"), ("A", "3", "A"), ("A", BAR1, "B"),
         ("B", "2", "B"), ("B", "1", "A"), ("B", BAR1, "B")],
        states=("A", "B"),
    )
    Y = full_shift(("1", "2", "3"))
    phi = SlidingBlockCode.one_block(X, {"1": "1", BAR1: "1", "2": "2", "3": "3"}, Y.alphabet)
    return X, Y, phi


def sofic_example_forbidden(word) -> bool:
    """Whether ``word`` contains ``1bar 2^n 3`` for some ``n >= 0``."""
    word = list(word)
    for i, a in enumerate(word):
        if a != BAR1:
            continue
        j = i + 1
        while j < len(word) and word[j] == "2":
            j += 1
        if j < len(word) and word[j] == "3":
            return True
    return False


def no_retract_witness(n: int) -> CodedPair:
    """``x = 1bar^inf 2^n .2 2^inf`` and ``y = 1^inf 2^n .2 3^inf``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = LassoPoint((BAR1,), (), ("2",), -n)
    y = LassoPoint(("1",), ("2",) * (n + 1), ("3",), -n)
    return CodedPair(x, y)


def repair_lift(x: LassoPoint, y: LassoPoint) -> LassoPoint:
    """Lift ``y`` to a point left asymptotic to ``x``.

    Splices ``x`` on coordinates ``<= 0`` with ``y`` after, then turns the
    ``1bar`` of every forbidden ``1bar 2^n 3`` into ``1``.
    """
    X, Y, phi = build_sofic_example()
    if not lasso_membership(x, X):
        raise PreconditionError(f"{x} is not in X")
    if not lasso_membership(y, Y):
        raise PreconditionError(f"{y} is not in Y")
    if not apply(phi, x).agrees_left_of(y, 0):
        raise PreconditionError("phi(x) and y differ on a coordinate <= 0")

    lo = min(x.origin, 1) - len(x.left)
    hi = max(y.end, 1)
    body = [x[i] for i in range(lo, 1)] + [y[i] for i in range(1, hi)]
    # a 1bar followed by a run of 2s that ends in a 3 inside the body or the tail
    tail_len = len(y.right)
    ext = body + [y[i] for i in range(hi, hi + tail_len + 1)]
    for k in range(len(body)):
        if ext[k] == BAR1 and sofic_example_forbidden(ext[k:]):
            body[k] = "1"
    lifted = LassoPoint(x.window(lo - len(x.left), lo), tuple(body), y.window(hi, hi + tail_len), lo)

    if not (lasso_membership(lifted, X) and lifted.left_asymptotic(x)
            and apply(phi, lifted) == y):
        raise AssertionError(f"repair lift failed validation: {lifted}")  # pragma: no cover
    return lifted


def random_agreeing_pair(rng: random.Random) -> CodedPair:
    """Random ``(x, y)`` with ``phi(x)`` and ``y`` agreeing on ``(-inf, 0]``."""
    from .shifts import random_lasso

    X, Y, phi = build_sofic_example()
    x = random_lasso(X, rng)
    fx = apply(phi, x)
    tail = tuple(rng.choice("123") for _ in range(rng.randint(0, 4)))
    loop = tuple(rng.choice("123") for _ in range(rng.randint(1, 3)))
    lo = min(fx.origin, 1) - len(fx.left)
    y = LassoPoint(fx.left, fx.window(lo, 1) + tail, loop, lo)
    return CodedPair(x, y)


# spacer construction --------------------------------------------------------

@dataclass(frozen=True)
class SqrtPair:
    sqrtX: Presentation
    sqrtY: Presentation
    sqrtPhi: SlidingBlockCode
    spacer: str
    renamed: bool = False


def _choose_spacer(spacer, taken):
    if spacer not in taken:
        return spacer, False
    k = 1
    while f"{spacer}{k}" in taken:
        k += 1
    return f"{spacer}{k}", True


def sqrt_presentation(X: Presentation, spacer: str) -> Presentation:
    """Each edge ``s -a-> t`` becomes ``s -a-> m -spacer-> t``."""
    edges = []
    states = list(X.states)
    for k, (s, a, t) in enumerate(X.edges):
        mid = f"{s}>{a}>{t}#{k}"
        states.append(mid)
        edges.append((s, a, mid))
        edges.append((mid, spacer, t))
    return Presentation(X.alphabet + (spacer,), tuple(states), tuple(edges))


def sqrt_construction(phi: SlidingBlockCode, spacer: str = "*") -> SqrtPair:
    """Interleave every point with a fresh spacer symbol, on both sides of ``phi``.

    If ``spacer`` already occurs in either alphabet a fresh name is derived
    and ``renamed`` is set.
    """
    if not phi.is_one_block:
        raise PreconditionError("the spacer construction needs a 1-block code")
    spacer, renamed = _choose_spacer(spacer, set(phi.domain.alphabet) | set(phi.codomain))
    sx = sqrt_presentation(phi.domain, spacer)
    sy = sqrt_presentation(phi.image_presentation, spacer)
    f = dict(phi.symbol_map())
    f[spacer] = spacer
    sphi = SlidingBlockCode.one_block(sx, f, phi.codomain + (spacer,))
    return SqrtPair(sx, sy, sphi, spacer, renamed)


def noncontinuing_example() -> SlidingBlockCode:
    """A 1-block code on a 1-step SFT that is not right continuing.

    ``c^inf`` maps to ``0^inf`` but the image point ``0^inf .1^inf`` has
    no preimage left asymptotic to ``c^inf``.
    """
    X = vertex_shift(("a", "b", "c"), [("a", "a"), ("a", "b"), ("b", "b"), ("c", "c")])
    return SlidingBlockCode.one_block(X, {"a": "0", "b": "1", "c": "0"}, ("0", "1"))


# retract zero recodings ----------------------------------------------------------

@dataclass(frozen=True)
class RecodedCode:
    conjugacyPsi: SlidingBlockCode
    recodedDomain: Presentation
    barPhi: SlidingBlockCode
    conjugacyTheta: SlidingBlockCode | None = None
    recodedCodomain: Presentation | None = None
    R: int = 0
    checks: dict = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return all(self.checks.values())


def _pairing_code(phi: SlidingBlockCode, pick: int, lo: int, hi: int):
    """Conjugacy ``x -> (x[i + pick], phi(x)[i + lo .. i + hi])``.

    Also returns a map from each output symbol to its two parts.
    """
    m, a = phi.memory, phi.anticipation
    M = max(-pick, m - lo)
    A = max(pick, hi + a)
    rule = {}
    parts = {}
    for w in language(phi.domain, M + A + 1):
        img = tuple(phi.rule[w[M + k - m:M + k + a + 1]] for k in range(lo, hi + 1))
        name = pair_name(w[M + pick], block_name(img))
        rule[w] = name
        parts[name] = (w[M + pick], img)
    alphabet = make_alphabet(sorted(parts))
    return SlidingBlockCode(phi.domain, M, A, rule, alphabet), parts


def retract_zero_recode(phi: SlidingBlockCode, samples: int = 50, seed: int = 0) -> RecodedCode:
    """Conjugate ``phi`` to a 1-block code with retract 0.

    With ``R`` the minimal retract, ``psi`` outputs at ``i`` the pair of
    ``x[i-R]`` and the image block ``phi(x)[i-R .. i]``; ``barPhi`` keeps the
    last image symbol.
    """
    R = minimal_retract(phi)
    if R is None:
        raise PreconditionError("code has no retract")
    psi, parts = _pairing_code(phi, -R, -R, 0)
    domain = image(psi)
    rule = {(name,): parts[name][1][-1] for name in domain.used_symbols}
    bar = SlidingBlockCode(domain, 0, 0, rule, phi.codomain)
    points = random_domain_lassos(phi, samples, seed)
    checks = {
        "psiInjective": bool(is_injective(psi)),
        "barPhiOneBlock": bar.is_one_block,
        "retractZero": bool(check_retract(bar, 0)),
        "factorsThrough": all(apply(bar, apply(psi, p)) == apply(phi, p) for p in points),
    }
    return RecodedCode(psi, domain, bar, R=R, checks=checks)


def bicontinuing_recode(phi: SlidingBlockCode, samples: int = 50, seed: int = 0) -> RecodedCode:
    """Conjugate both sides so ``phi`` becomes 1-block with retracts 0 and 0.

    With ``R`` the larger of the two minimal retracts, ``psi`` outputs
    ``x[i]`` paired with ``phi(x)[i-R .. i+R]``, ``theta`` outputs
    ``y[i-R .. i+R]`` and ``barPhi`` maps a pair to its second component.
    """
    right = minimal_retract(phi)
    left = minimal_left_retract(phi)
    if right is None or left is None:
        missing = "right" if right is None else "left"
        raise PreconditionError(f"code has no {missing} retract")
    R = max(right, left)
    psi, parts = _pairing_code(phi, 0, -R, R)
    Y = phi.image_presentation
    trule = {w: block_name(w) for w in language(Y, 2 * R + 1)}
    theta = SlidingBlockCode(Y, R, R, trule, make_alphabet(sorted(set(trule.values()))))
    domain = image(psi)
    codomain = image(theta)
    rule = {(name,): block_name(parts[name][1]) for name in domain.used_symbols}
    bar = SlidingBlockCode(domain, 0, 0, rule, theta.codomain)
    points = random_domain_lassos(phi, samples, seed)
    checks = {
        "psiInjective": bool(is_injective(psi)),
        "thetaInjective": bool(is_injective(theta)),
        "barPhiOneBlock": bar.is_one_block,
        "retractZeroRight": bool(check_retract(bar, 0)),
        "retractZeroLeft": bool(check_left_retract(bar, 0)),
        "imageMatches": language_equal(bar.image_presentation, codomain),
        "factorsThrough": all(
            apply(bar, apply(psi, p)) == apply(theta, apply(phi, p)) for p in points),
    }
    return RecodedCode(psi, domain, bar, theta, codomain, R, checks)


# small corpus codes ----------------------------------------------------------

def min_code(memory: int = 0) -> SlidingBlockCode:
    """Minimum of two neighbours on the full 2-shift.

    ``memory=0`` gives ``y_i = min(x_i, x_{i+1})`` (minimal retract 1),
    ``memory=1`` gives ``y_i = min(x_{i-1}, x_i)``, the same map followed by
    one shift (minimal retract 2).
    """
    if memory not in (0, 1):
        raise ValueError("memory must be 0 or 1")
    X = full_shift(("0", "1"))
    rule = {(a, b): min(a, b) for a in "01" for b in "01"}
    return SlidingBlockCode(X, memory, 1 - memory, rule, ("0", "1"))


def xor_code() -> SlidingBlockCode:
    """``y_i = x_i + x_{i+1} mod 2`` on the full 2-shift."""
    X = full_shift(("0", "1"))
    rule = {(a, b): str((int(a) + int(b)) % 2) for a in "01" for b in "01"}
    return SlidingBlockCode(X, 0, 1, rule, ("0", "1"))
