"""Eventually periodic bi-infinite points.

A :class:`LassoPoint` stands for the sequence ``...uuu w vvv...`` where the
first symbol of ``w`` sits at coordinate ``origin``.  Points are stored in a
canonical form, so two lassos compare equal exactly when they agree on every
coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Sequence

Word = tuple[str, ...]


def primitive_root(word: Sequence[str]) -> Word:
    """Shortest ``r`` with ``word == r * k``."""
    word = tuple(word)
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word[:p] * (n // p) == word:
            return word[:p]
    return word


@dataclass(frozen=True)
class LassoPoint:
    left: Word
    center: Word
    right: Word
    origin: int = 0

    def __post_init__(self):
        left, center, right = tuple(self.left), tuple(self.center), tuple(self.right)
        if not left or not right:
            raise ValueError("lasso loops must be nonempty")
        left, center, right, origin = _canonical(left, center, right, int(self.origin))
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def periodic(cls, loop: Sequence[str], origin: int = 0) -> LassoPoint:
        return cls(tuple(loop), (), tuple(loop), origin)

    @property
    def end(self) -> int:
        """First coordinate of the right periodic tail."""
        return self.origin + len(self.center)

    def __getitem__(self, i: int) -> str:
        return _coord(self.left, self.center, self.right, self.origin, i)

    def window(self, lo: int, hi: int) -> Word:
        """Symbols at coordinates ``lo .. hi - 1``."""
        return tuple(self[i] for i in range(lo, hi))

    def shift(self, k: int = 1) -> LassoPoint:
        """The shift map applied ``k`` times: ``result[i] == self[i + k]``."""
        return LassoPoint(self.left, self.center, self.right, self.origin - k)

    def map_symbols(self, f) -> LassoPoint:
        return LassoPoint(
            tuple(map(f, self.left)), tuple(map(f, self.center)),
            tuple(map(f, self.right)), self.origin,
        )

    def agrees_left_of(self, other: LassoPoint, upto: int) -> bool:
        """True iff both points coincide on every coordinate ``<= upto``."""
        lo = min(self.origin, other.origin, upto + 1)
        span = len(self.left) * len(other.left)
        start = lo - span
        return all(self[i] == other[i] for i in range(start, upto + 1))

    def left_asymptotic(self, other: LassoPoint) -> bool:
        lo = min(self.origin, other.origin) - 1
        return self.agrees_left_of(other, lo)

    def right_asymptotic(self, other: LassoPoint) -> bool:
        hi = max(self.end, other.end)
        span = len(self.right) * len(other.right)
        return all(self[i] == other[i] for i in range(hi, hi + span))

    def to_json(self) -> dict:
        return {
            "left": list(self.left),
            "center": list(self.center),
            "right": list(self.right),
            "origin": self.origin,
        }

    @classmethod
    def from_json(cls, data: dict) -> LassoPoint:
        return cls(tuple(data["left"]), tuple(data["center"]), tuple(data["right"]),
                   int(data.get("origin", 0)))

    def __str__(self) -> str:
        def fmt(word):
            return " ".join(word)
        head = f"({fmt(self.left)})^inf"
        tail = f"({fmt(self.right)})^inf"
        body = []
        for i in range(min(self.origin, 0), max(self.end, 1)):
            sym = self[i]
            body.append(("." + sym) if i == 0 else sym)
        return f"{head} {' '.join(body)} {tail}"


def _coord(left, center, right, origin, i):
    if i < origin:
        return left[(i - origin) % len(left)]
    j = i - origin
    if j < len(center):
        return center[j]
    return right[(j - len(center)) % len(right)]


def _canonical(left, center, right, origin):
    u, v = primitive_root(left), primitive_root(right)
    # a primitive root keeps the same phase: coordinate origin-1 is still u[-1]
    end = origin + len(center)

    def f(i):
        return _coord(u, center, v, origin, i)

    horizon = end + len(u) * len(v) + len(u) + len(v)
    d_left = None
    for i in range(origin, horizon):
        if f(i) != u[(i - origin) % len(u)]:
            d_left = i
            break
    if d_left is None:
        p = len(u)
        loop = tuple(f(i) for i in range(-p, 0))
        return loop, (), loop, 0

    d_right = d_left - 1
    for j in range(end - 1, d_left - 1, -1):
        if f(j) != v[(j - end) % len(v)]:
            d_right = j
            break
    if d_right >= d_left:
        new_center = tuple(f(i) for i in range(d_left, d_right + 1))
        right_start = d_right + 1
    else:
        new_center = ()
        right_start = d_left
    new_left = tuple(f(i) for i in range(d_left - len(u), d_left))
    new_right = tuple(f(i) for i in range(right_start, right_start + len(v)))
    return new_left, new_center, new_right, d_left


def period_span(*points: LassoPoint) -> int:
    """A common period of all left and right tails."""
    return lcm(*(len(p.left) for p in points), *(len(p.right) for p in points))
