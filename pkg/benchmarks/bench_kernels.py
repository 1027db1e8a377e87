"""Time the compiled bitset kernels against the plain Python versions.

    python3 benchmarks/bench_kernels.py [--length 6] [--symbols 3] [--states 6] [--repeat 5]
"""

import argparse
import random
import time

from shiftcodes import _kernels
from shiftcodes.corpus import random_graph
from shiftcodes.resolving import _lasso_batch


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--length", type=int, default=6, help="max combined loop and word length")
    ap.add_argument("--symbols", type=int, default=3)
    ap.add_argument("--states", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    X = random_graph(random.Random(args.seed), args.states, args.symbols)
    syms = tuple(range(len(X.alphabet)))
    succ = _kernels.table_array(X.succ, len(X.alphabet))
    pred = _kernels.table_array(X.pred, len(X.alphabet))
    _, (lw, ul, wl) = _lasso_batch(syms, args.length, False)
    _, (rw, rl, vl) = _lasso_batch(syms, args.length, True)
    print(f"{len(X.states)} states, {len(syms)} symbols, {len(lw)} rows, jit enabled: {_kernels.USE_JIT}")

    cases = [
        ("left", lambda: _kernels.left_masks(succ, lw, ul, wl), lambda: _kernels.left_masks_py(succ, lw, ul, wl)),
        ("right", lambda: _kernels.right_masks(pred, rw, rl, vl), lambda: _kernels.right_masks_py(pred, rw, rl, vl)),
    ]
    for name, fast, slow in cases:
        fast()  # compile outside the timing
        t_fast, a = best_of(fast, args.repeat)
        t_slow, b = best_of(slow, args.repeat)
        assert a.tolist() == b.tolist(), f"{name} kernels disagree"
        print(f"{name:5s}  jit {t_fast * 1e3:8.2f} ms   python {t_slow * 1e3:8.2f} ms   "
              f"speedup {t_slow / t_fast:6.1f}x")


if __name__ == "__main__":
    main()
