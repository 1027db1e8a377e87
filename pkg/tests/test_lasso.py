from hypothesis import given
from hypothesis import strategies as st

from shiftcodes.lasso import LassoPoint, primitive_root

words = st.lists(st.sampled_from("ab"), min_size=1, max_size=4).map(tuple)
centers = st.lists(st.sampled_from("ab"), max_size=5).map(tuple)
lassos = st.builds(LassoPoint, words, centers, words, st.integers(-6, 6))


def test_primitive_root():
    assert primitive_root("abab") == ("a", "b")
    assert primitive_root("aba") == ("a", "b", "a")


def test_coordinates():
    p = LassoPoint(("1",), ("2", "3"), ("4",), -1)
    assert [p[i] for i in range(-3, 3)] == ["1", "1", "2", "3", "4", "4"]
    assert p.window(-1, 1) == ("2", "3")
    assert p.end == 1


def test_canonical_equality():
    # the same point written two ways
    assert LassoPoint(("a",), ("a", "b"), ("b",), 0) == LassoPoint(("a", "a"), (), ("b", "b"), 1)
    assert LassoPoint.periodic(("a", "b")) == LassoPoint(("a", "b"), ("a", "b"), ("a", "b"), 2)


@given(lassos, st.integers(-10, 10))
def test_equal_points_agree_everywhere(p, k):
    q = LassoPoint(p.left * 2, p.center, p.right * 3, p.origin)
    assert p == q
    assert p[k] == q[k]


@given(lassos, st.integers(-5, 5))
def test_shift_moves_coordinates(p, k):
    assert all(p.shift(k)[i] == p[i + k] for i in range(-8, 8))


@given(lassos)
def test_json_round_trip(p):
    assert LassoPoint.from_json(p.to_json()) == p


@given(lassos, lassos)
def test_asymptotic_relations(p, q):
    if p == q:
        assert p.left_asymptotic(q) and p.right_asymptotic(q)
    h = max(q.end, p.origin + 1)
    center = p.window(p.origin, p.origin + 1) + q.window(p.origin + 1, h)
    spliced = LassoPoint(p.left, center, q.window(h, h + len(q.right)), p.origin)
    assert spliced.left_asymptotic(p)
    assert spliced.right_asymptotic(q)


def test_agrees_left_of():
    p = LassoPoint(("a",), ("b",), ("a",), 0)
    q = LassoPoint(("a",), ("c",), ("a",), 0)
    assert p.agrees_left_of(q, -1)
    assert not p.agrees_left_of(q, 0)
