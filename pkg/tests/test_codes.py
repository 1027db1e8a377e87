import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftcodes.codes import (
    SlidingBlockCode,
    apply,
    compose,
    higher_block,
    image,
    is_injective,
    random_domain_lassos,
    recode_to_one_block,
    reverse_code,
    reverse_point,
)
from shiftcodes.constructions import BAR1, build_sofic_example, min_code, xor_code
from shiftcodes.corpus import golden_mean, random_graph, random_one_block
from shiftcodes.errors import DomainMismatchError, NotInDomainError
from shiftcodes.lasso import LassoPoint
from shiftcodes.shifts import (
    SftSpec,
    from_forbidden,
    full_shift,
    language,
    language_equal,
    lasso_membership,
)


def by_hand(phi, p, lo, hi):
    """Windowwise evaluation, coordinate by coordinate."""
    return tuple(phi.rule[tuple(p[j] for j in range(i - phi.memory, i + phi.anticipation + 1))]
                 for i in range(lo, hi))


def test_sofic_apply():
    _, _, phi = build_sofic_example()
    x = LassoPoint((BAR1,), ("2",), ("2",), 0)
    assert apply(phi, x) == LassoPoint(("1",), ("2",), ("2",), 0)


def test_min_code_apply():
    phi = min_code(memory=1)
    x = LassoPoint(("0",), ("1", "1", "1"), ("0",), -2)
    assert apply(phi, x) == LassoPoint(("0",), ("0", "1", "1"), ("0",), -2)


def test_identity_apply():
    X = golden_mean()
    p = LassoPoint(("0",), ("1", "0", "1"), ("0", "1"), -1)
    assert apply(SlidingBlockCode.identity(X), p) == p


def test_apply_rejects_foreign_points():
    with pytest.raises(NotInDomainError):
        apply(SlidingBlockCode.identity(golden_mean()), LassoPoint(("1",), (), ("0",)))


def test_image_examples():
    X, Y, phi = build_sofic_example()
    assert language_equal(image(phi), Y)
    one = SlidingBlockCode.one_block(golden_mean(), {"0": "a", "1": "a"}, ("a",))
    assert language(image(one), 4) == {("a",) * 4}
    no101 = from_forbidden(SftSpec(("0", "1"), frozenset({("1", "0", "1")})))
    assert language_equal(image(min_code()), no101)


def test_image_matches_brute_force():
    phi = min_code()
    for n in range(1, 6):
        brute = {tuple(min(w[i], w[i + 1]) for i in range(n))
                 for w in itertools.product("01", repeat=n + 1)}
        assert language(image(phi), n) == brute


def test_recode_min_code():
    phi = min_code(memory=1)
    psi, one = recode_to_one_block(phi)
    assert one.is_one_block
    for p in random_domain_lassos(phi, 50, seed=3):
        assert apply(one, apply(psi, p)) == apply(phi, p)


def test_recode_one_block_is_identity():
    _, _, phi = build_sofic_example()
    psi, one = recode_to_one_block(phi)
    assert one is phi and psi.is_one_block


def test_injective_examples():
    _, _, phi = build_sofic_example()
    d = is_injective(phi)
    assert not d
    x, x2 = d.witness
    assert x != x2 and apply(phi, x) == apply(phi, x2)
    _, psi = higher_block(golden_mean(), 3, 1)
    assert is_injective(psi)
    assert not is_injective(xor_code())


def test_compose():
    phi = xor_code()
    twice = compose(phi, phi)
    assert twice.window == 3
    for p in random_domain_lassos(phi, 20, seed=1):
        assert apply(twice, p) == apply(phi, apply(phi, p))
    one = SlidingBlockCode.one_block(full_shift(("0", "1")), {"0": "a", "1": "b"}, ("a", "b"))
    with pytest.raises(DomainMismatchError):
        compose(phi, one)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_apply_matches_windowwise_evaluation(seed):
    rng = random.Random(seed)
    X = random_graph(rng, 3, 3)
    phi = random_one_block(rng, X, 2)
    _, psi = higher_block(X, 2, rng.randint(0, 1))
    for p in random_domain_lassos(phi, 5, seed):
        for code in (phi, psi):
            q = apply(code, p)
            assert q.window(-10, 10) == by_hand(code, p, -10, 10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_reverse_code_commutes_with_reversal(seed):
    rng = random.Random(seed)
    X = random_graph(rng, 3, 2)
    phi = random_one_block(rng, X, 2)
    _, psi = higher_block(X, 3, 1)
    rp = reverse_code(psi)
    for p in random_domain_lassos(phi, 5, seed):
        assert lasso_membership(reverse_point(p), rp.domain)
        assert apply(rp, reverse_point(p)) == reverse_point(apply(psi, p))
        assert reverse_point(reverse_point(p)) == p


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_injectivity_witnesses_collide(seed):
    rng = random.Random(seed)
    X = random_graph(rng, 2, 3)
    phi = random_one_block(rng, X, 2)
    d = is_injective(phi)
    if not d:
        x, x2 = d.witness
        assert x != x2 and apply(phi, x) == apply(phi, x2)
    else:
        # injective: distinct sampled points keep distinct images
        pts = set(random_domain_lassos(phi, 10, seed))
        assert len({apply(phi, p) for p in pts}) == len(pts)
