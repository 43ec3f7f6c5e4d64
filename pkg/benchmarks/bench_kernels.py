"""Time each hot kernel compiled with numba and through its numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

The fallback timings are what a run with SETWISE_KEMENY_NO_NUMBA=1 would see.
Compilation happens in a warm-up call and is not counted.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from setwise_kemeny import kernels as K
from setwise_kemeny._accel import USE_NUMBA
from setwise_kemeny.sim import random_profile


def best_of(fn, repeat: int) -> float:
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def with_fallback(fn):
    """Run ``fn`` with the dispatchers routed to the numpy/python path."""

    def run():
        K.USE_NUMBA = False
        try:
            return fn()
        finally:
            K.USE_NUMBA = USE_NUMBA

    return run


def cases(quick: bool):
    p = random_profile(9, 60, seed=1)
    before, top = p.pair_tally().before, p.triple_tally().top
    orders = np.array([r.order for r, _ in p.votes], dtype=np.int64)
    weights = np.ones(len(orders), dtype=np.int64)
    rng = np.random.default_rng(0)
    many = np.array([rng.permutation(p.n) for _ in range(20_000 if quick else 200_000)])
    dp_n = 12 if quick else 16
    q = random_profile(dp_n, 25, seed=2)
    qb, qt = q.pair_tally().before, q.triple_tally().top
    trials = 20_000 if quick else 200_000

    # branch and bound: near-unanimous profile so the interpreted path finishes
    base = rng.permutation(14)
    near = []
    for _ in range(11):
        o = base.copy()
        i = int(rng.integers(0, 13))
        o[i], o[i + 1] = o[i + 1], o[i]
        near.append(o)
    nb = np.array(near)
    bb_before = K.pair_tally(nb, np.ones(11, dtype=np.int64), 14)
    bb_top = K.triple_tally(nb, np.ones(11, dtype=np.int64), 14)
    empty = np.zeros(0, dtype=np.int64)
    bnb_args = (bb_before, bb_top, 11, 3, 14, 10**9, np.zeros(14, dtype=np.int64), (1 << 14) - 1, (empty,) * 4, (empty,) * 2)

    def bnb_interpreted():
        compiled = K._bnb_loop
        K._bnb_loop = compiled.py_func
        try:
            return K.bnb_search(*bnb_args)
        finally:
            K._bnb_loop = compiled

    return [
        ("pair tally (n=9, 60 votes)", lambda: K.pair_tally(orders, weights, p.n)),
        ("triple tally (n=9, 60 votes)", lambda: K.triple_tally(orders, weights, p.n)),
        (f"score {len(many)} rankings, k=3", lambda: K.score_orders(many, before, top, p.m, 3)),
        (f"subset DP n={dp_n}, k=3", lambda: K.dp_value_table(qb, qt, q.m, 3, dp_n)),
        (f"applicability (10, 11), {trials} trials", lambda: K.applicability_bits(10, 11, 1, 0, trials)),
        ("exhaustive medians n=8, k=3", lambda: K.exhaustive_medians(before[:8, :8], top[:8, :8, :8], p.m, 3, 8)),
        ("branch and bound n=14, k=3", lambda: K.bnb_search(*bnb_args), bnb_interpreted),
    ]


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--quick", action="store_true", help="smaller inputs")
    args = parser.parse_args(argv)
    if not USE_NUMBA:
        raise SystemExit("numba is disabled (SETWISE_KEMENY_NO_NUMBA or not installed); nothing to compare")
    print(f"{'kernel':<42} {'numba':>10} {'fallback':>10} {'speedup':>8}")
    for case in cases(args.quick):
        name, fast = case[0], case[1]
        slow = case[2] if len(case) > 2 else with_fallback(fast)
        a = best_of(fast, args.repeat)
        b = best_of(slow, max(1, args.repeat // 3))
        print(f"{name:<42} {a * 1e3:9.2f}ms {b * 1e3:9.2f}ms {b / a:7.1f}x")


if __name__ == "__main__":
    main()
