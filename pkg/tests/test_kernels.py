"""The compiled kernels and the numpy fallbacks must agree exactly."""

import json
import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from setwise_kemeny import kernels as K
from setwise_kemeny._accel import USE_NUMBA

from _profiles import mixed_profiles

needs_numba = pytest.mark.skipif(not USE_NUMBA, reason="numba disabled")

PROFILES = mixed_profiles(40, (2, 7), (1, 9), seed=31)


def arrays(p):
    orders = np.array([r.order for r, _ in p.votes], dtype=np.int64)
    weights = np.array([w for _, w in p.votes], dtype=np.int64)
    return orders, weights


def tallies(p):
    return p.pair_tally().before, p.triple_tally().top


@needs_numba
def test_tally_kernels_agree():
    for p in PROFILES:
        orders, weights = arrays(p)
        assert np.array_equal(K._pair_tally_loop(orders, weights, p.n), K._pair_tally_np(orders, weights, p.n))
        a = K._triple_tally_loop(orders, weights, p.n)
        b = K._triple_tally_np(orders, weights, p.n)
        # only entries with three distinct indices carry meaning
        for w in range(p.n):
            for x in range(p.n):
                for y in range(p.n):
                    if len({w, x, y}) == 3:
                        assert a[w, x, y] == b[w, x, y]


@needs_numba
@pytest.mark.parametrize("k", [2, 3])
def test_score_kernels_agree(k):
    rng = np.random.default_rng(k)
    for p in PROFILES:
        before, top = tallies(p)
        orders = np.array([rng.permutation(p.n) for _ in range(50)], dtype=np.int64)
        fast = K._score_orders_loop(orders, before, top, p.m, k)
        assert np.array_equal(fast, K._score_orders_np(orders, before, top, p.m, k))
        assert np.array_equal(fast, K._score_orders_np(orders, before, top, p.m, k, chunk=7))
        assert np.array_equal(fast, K._score_orders_loop.py_func(orders, before, top, p.m, k))


@needs_numba
@pytest.mark.parametrize("k", [2, 3])
def test_dp_kernels_agree(k):
    for p in PROFILES:
        before, top = tallies(p)
        assert np.array_equal(K._dp_loop(before, top, p.m, k, p.n), K._dp_np(before, top, p.m, k, p.n))


@needs_numba
@pytest.mark.parametrize("k", [2, 3])
def test_enumeration_agrees(k):
    for p in PROFILES[:15]:
        before, top = tallies(p)
        best, hits = K._enumerate_loop(before, top, p.m, k, p.n, -1, np.zeros((1, p.n), np.int64))
        out = np.zeros((hits, p.n), dtype=np.int64)
        K._enumerate_loop(before, top, p.m, k, p.n, best, out)
        orders = K._all_orders(p.n)
        scores = K._score_orders_np(orders, before, top, p.m, k)
        assert best == scores.min()
        assert np.array_equal(out, orders[scores == best])


@needs_numba
def test_bnb_interpreted_matches_compiled():
    from setwise_kemeny import median_bnb

    for p in PROFILES[:12]:
        compiled = median_bnb(p, 3)
        original = K._bnb_loop
        K._bnb_loop = original.py_func
        try:
            interpreted = median_bnb(p, 3)
        finally:
            K._bnb_loop = original
        assert compiled == interpreted
        assert compiled.stats["nodes"] == interpreted.stats["nodes"]


@needs_numba
@pytest.mark.parametrize("n, m", [(3, 3), (4, 5), (10, 11)])
def test_prng_streams_bit_identical(n, m):
    trials = np.arange(200, dtype=np.uint64)
    vec = K._orders_np(n, m, np.uint64(1), trials)
    for t in range(0, 200, 17):
        out = np.zeros((m, n), dtype=np.int64)
        K._trial_orders(n, m, np.uint64(1), np.uint64(t), out)
        assert np.array_equal(out, vec[t])
    compiled = K._applicability_loop(n, m, np.uint64(1), 0, 5000)
    original = K.USE_NUMBA
    K.USE_NUMBA = False
    try:
        fallback = K.applicability_bits(n, m, 1, 0, 5000, chunk=999)
    finally:
        K.USE_NUMBA = original
    assert np.array_equal(compiled, fallback)


def test_seeds_give_different_streams():
    a = K.applicability_bits(3, 3, 1, 0, 2000)
    b = K.applicability_bits(3, 3, 2, 0, 2000)
    assert not np.array_equal(a, b)
    assert not np.array_equal(np.sort(K.random_orders(5, 40, 1), axis=0), np.sort(K.random_orders(5, 40, 2), axis=0))


def test_random_orders_are_permutations():
    out = K.random_orders(9, 30, seed=5, trial=3)
    assert out.shape == (30, 9)
    assert all(sorted(row) == list(range(9)) for row in out.tolist())


SCRIPT = textwrap.dedent(
    """
    import json
    import numpy as np
    from setwise_kemeny import _accel, median_bnb, median_bruteforce, median_dp, parse_profile
    from setwise_kemeny.kernels import applicability_bits, random_orders

    p = parse_profile(open({path!r}).read())
    print(json.dumps({{
        "backend": _accel.backend_name(),
        "brute": [median_bruteforce(p, k).optimal_score for k in (2, 3)],
        "dp": [median_dp(p, k).median.order for k in (2, 3)],
        "bnb": [median_bnb(p, k).median.order for k in (2, 3)],
        "bits": applicability_bits(4, 5, 1, 0, 3000).sum(axis=0).tolist(),
        "orders": random_orders(6, 4, 7, 11).tolist(),
    }}))
    """
)


def run_backend(path, disable: bool) -> dict:
    env = dict(os.environ)
    env["SETWISE_KEMENY_NO_NUMBA"] = "1" if disable else "0"
    out = subprocess.run(
        [sys.executable, "-c", SCRIPT.format(path=str(path))],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def test_env_flag_selects_fallback_with_identical_results(tmp_path):
    from setwise_kemeny.paperlab import asset_text

    path = tmp_path / "e.profile"
    path.write_text(asset_text("lower_5_8"))
    fallback = run_backend(path, disable=True)
    assert fallback.pop("backend") == "numpy"
    default = run_backend(path, disable=False)
    assert default.pop("backend") == ("numba" if USE_NUMBA else "numpy")
    assert fallback == default
