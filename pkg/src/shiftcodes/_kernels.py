"""Bitset kernels for the brute-force oracles.

Each kernel runs over a batch of encoded words and returns one state bitset
per word.  With numba available they are compiled with ``@njit``; setting
``SHIFTCODES_DISABLE_JIT=1`` selects the plain numpy/Python path instead.
Bitsets are int64, so graphs are limited to ``MAX_STATES`` states here.
"""

import os

import numpy as np

MAX_STATES = 62

_disabled = os.environ.get("SHIFTCODES_DISABLE_JIT", "").lower() in ("1", "true", "yes")

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_JIT = numba is not None and not _disabled


def left_masks_py(succ, words, ulen, wlen):
    """States ending a left-infinite path labeled ``u^inf w`` for each row.

    Row ``i`` of ``words`` holds ``u`` in its first ``ulen[i]`` entries and
    ``w`` in the following ``wlen[i]``.
    """
    n_states = succ.shape[0]
    full = (1 << n_states) - 1
    out = np.zeros(words.shape[0], dtype=np.int64)
    for i in range(words.shape[0]):
        mask = full
        while True:
            m = mask
            for j in range(ulen[i]):
                nxt = 0
                q = 0
                while m:
                    if m & 1:
                        nxt |= succ[q, words[i, j]]
                    m >>= 1
                    q += 1
                m = nxt
            if m == mask:
                break
            mask = m
        for j in range(ulen[i], ulen[i] + wlen[i]):
            nxt = 0
            q = 0
            m = mask
            while m:
                if m & 1:
                    nxt |= succ[q, words[i, j]]
                m >>= 1
                q += 1
            mask = nxt
        out[i] = mask
    return out


def right_masks_py(pred, words, rlen, vlen):
    """States starting a right-infinite path labeled ``r v^inf`` for each row."""
    n_states = pred.shape[0]
    full = (1 << n_states) - 1
    out = np.zeros(words.shape[0], dtype=np.int64)
    for i in range(words.shape[0]):
        mask = full
        lo = rlen[i]
        hi = rlen[i] + vlen[i]
        while True:
            m = mask
            for j in range(hi - 1, lo - 1, -1):
                nxt = 0
                q = 0
                while m:
                    if m & 1:
                        nxt |= pred[q, words[i, j]]
                    m >>= 1
                    q += 1
                m = nxt
            if m == mask:
                break
            mask = m
        for j in range(lo - 1, -1, -1):
            nxt = 0
            q = 0
            m = mask
            while m:
                if m & 1:
                    nxt |= pred[q, words[i, j]]
                m >>= 1
                q += 1
            mask = nxt
        out[i] = mask
    return out


if USE_JIT:
    left_masks = numba.njit(cache=True)(left_masks_py)
    right_masks = numba.njit(cache=True)(right_masks_py)
else:
    left_masks = left_masks_py
    right_masks = right_masks_py


def table_array(table, symbols: int) -> np.ndarray:
    """``succ``/``pred`` table as a dense ``(states, symbols)`` int64 array."""
    if len(table) > MAX_STATES:
        raise ValueError(f"kernels support at most {MAX_STATES} states")
    out = np.zeros((len(table), symbols), dtype=np.int64)
    for q, row in enumerate(table):
        for a in range(symbols):
            out[q, a] = row[a]
    return out


def encode_batch(rows):
    """Pack ``(first, second)`` word pairs into the kernels' array layout."""
    width = max((len(a) + len(b) for a, b in rows), default=1) or 1
    words = np.zeros((len(rows), width), dtype=np.int64)
    first = np.zeros(len(rows), dtype=np.int64)
    second = np.zeros(len(rows), dtype=np.int64)
    for i, (a, b) in enumerate(rows):
        words[i, :len(a)] = a
        words[i, len(a):len(a) + len(b)] = b
        first[i], second[i] = len(a), len(b)
    return words, first, second
