import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shiftcodes import _kernels
from shiftcodes.corpus import random_graph
from shiftcodes.lasso import LassoPoint
from shiftcodes.shifts import left_config, right_config


def _batch(rng, X, rows):
    syms = range(len(X.alphabet))
    pairs = []
    for _ in range(rows):
        u = tuple(rng.choice(syms) for _ in range(rng.randint(1, 3)))
        w = tuple(rng.choice(syms) for _ in range(rng.randint(0, 3)))
        pairs.append((u, w))
    return pairs


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_left_masks_match_reference(seed):
    rng = random.Random(seed)
    X = random_graph(rng, rng.randint(1, 5), rng.randint(1, 3))
    pairs = _batch(rng, X, 20)
    words, ul, wl = _kernels.encode_batch(pairs)
    succ = _kernels.table_array(X.succ, len(X.alphabet))
    fast = _kernels.left_masks(succ, words, ul, wl)
    slow = _kernels.left_masks_py(succ, words, ul, wl)
    assert fast.tolist() == slow.tolist()
    for (u, w), got in zip(pairs, slow.tolist()):
        p = LassoPoint(tuple(X.alphabet[a] for a in u), tuple(X.alphabet[a] for a in w), ("x",), -len(w))
        assert got == left_config(X, p, -1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_right_masks_match_reference(seed):
    rng = random.Random(seed)
    X = random_graph(rng, rng.randint(1, 5), rng.randint(1, 3))
    pairs = [(w, v) for v, w in _batch(rng, X, 20)]
    words, rl, vl = _kernels.encode_batch(pairs)
    pred = _kernels.table_array(X.pred, len(X.alphabet))
    fast = _kernels.right_masks(pred, words, rl, vl)
    slow = _kernels.right_masks_py(pred, words, rl, vl)
    assert fast.tolist() == slow.tolist()
    for (r, v), got in zip(pairs, slow.tolist()):
        p = LassoPoint(("x",), tuple(X.alphabet[a] for a in r), tuple(X.alphabet[a] for a in v), 0)
        assert got == right_config(X, p, 0)


def test_table_array_shape_and_cap():
    X = random_graph(random.Random(1), 3, 2)
    arr = _kernels.table_array(X.succ, len(X.alphabet))
    assert arr.shape == (len(X.states), 2) and arr.dtype == np.int64
    with pytest.raises(ValueError):
        _kernels.table_array([{}] * (_kernels.MAX_STATES + 1), 1)


def test_disable_flag_selects_pure_path():
    code = ("from shiftcodes import _kernels; from shiftcodes.constructions import build_sofic_example;"
            "from shiftcodes.resolving import oracle_retract;"
            "print(_kernels.USE_JIT, [oracle_retract(build_sofic_example()[2], n, 4).holds for n in range(3)])")
    env = dict(os.environ, SHIFTCODES_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False [False, False, False]"
