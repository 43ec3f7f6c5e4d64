"""Exact k-wise Kemeny medians.

Three solvers share one cost model: building a ranking top-down, placing c
first among the unplaced set R costs, for each subset S of R containing c
with |S| <= k, the number of votes whose top of S is not c.

* :func:`median_bruteforce` enumerates all n! rankings (reference oracle,
  returns every median).
* :func:`median_dp` runs the subset DP over R (one median).
* :func:`median_bnb` is a depth-first prefix search using the reduction
  rules for pruning (one median).

DP and B&B break ties toward the lexicographically smallest order of
candidate indices, so they return the same ranking.
"""

from __future__ import annotations

import time

import numpy as np

from . import kernels
from .distance import _NO_TRIPLES, distance_oracle
from .model import MedianResult, Profile, Ranking
from .reduce import (
    ConstraintSet,
    FiveSixthsPremise,
    ShapePremise,
    SixCandidatePremise,
    run_all_rules,
)

__all__ = ["MedianResult", "median_bruteforce", "median_dp", "median_bnb", "SolverLimitError"]

BRUTE_MAX_N = 10
DP_MAX_N = 24
BNB_MAX_N = 62


class SolverLimitError(ValueError):
    pass


def _tallies(profile: Profile, k: int):
    before = profile.pair_tally().before
    top = profile.triple_tally().top if k == 3 else _NO_TRIPLES
    return before, top


def _check_k(k: int):
    if k not in (2, 3):
        raise ValueError(f"k must be 2 or 3, got {k}")


def median_bruteforce(profile: Profile, k: int, all_medians: bool = True) -> MedianResult:
    """Score all n! rankings. k > 3 uses the subset-enumeration distance."""
    n = profile.n
    if n > BRUTE_MAX_N:
        raise SolverLimitError(f"brute force is limited to n <= {BRUTE_MAX_N}, got n={n}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    start = time.perf_counter()
    if k <= 3:
        before, top = _tallies(profile, k)
        best, orders = kernels.exhaustive_medians(before, top, profile.m, k, n, collect=True)
        medians = tuple(Ranking(tuple(row)) for row in orders)
    else:
        from itertools import permutations

        scored = []
        for order in permutations(range(n)):
            r = Ranking(order)
            scored.append((sum(w * distance_oracle(r, v, k) for v, w in profile.votes), r))
        best = min(s for s, _ in scored)
        medians = tuple(r for s, r in scored if s == best)
    if not all_medians:
        medians = medians[:1]
    return MedianResult(
        scheme=k,
        optimal_score=int(best),
        medians=medians,
        complete=all_medians,
        solver="brute",
        stats={"seconds": time.perf_counter() - start, "rankings": _factorial(n)},
    )


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def median_dp(profile: Profile, k: int) -> MedianResult:
    _check_k(k)
    n = profile.n
    if n > DP_MAX_N:
        raise SolverLimitError(f"subset DP is limited to n <= {DP_MAX_N}, got n={n}")
    start = time.perf_counter()
    before, top = _tallies(profile, k)
    score, order = kernels.dp_median(before, top, profile.m, k, n)
    return MedianResult(
        scheme=k,
        optimal_score=int(score),
        medians=(Ranking(tuple(order)),),
        complete=False,
        solver="dp",
        stats={"seconds": time.perf_counter() - start, "states": 1 << n},
    )


def _bit(c: int) -> int:
    return 1 << c


def _mask(members) -> int:
    out = 0
    for c in members:
        out |= _bit(c)
    return out


def compile_constraints(constraints: ConstraintSet, k: int):
    """Arrays consumed by the branch-and-bound kernel for scheme k."""
    n = constraints.n
    pred = constraints.pred_masks(k).copy()
    first = _mask(constraints.allowed_winners(k))
    c56 = ([], [], [], [])
    small = ([], [])
    if k == 3:
        for p in constraints.conditional:
            if isinstance(p, FiveSixthsPremise):
                c56[0].append(p.x)
                c56[1].append(_mask(p.dominators))
                c56[2].append(_mask(p.dominated))
                c56[3].append(len(p.dominators))
            elif isinstance(p, ShapePremise):
                small[0].append(p.x)
                small[1].append(p.z)
            elif isinstance(p, SixCandidatePremise):
                for y in p.above:
                    pred[p.x] |= _bit(y)
                for y in p.below:
                    pred[y] |= _bit(p.x)
    as_arr = lambda xs: np.asarray(xs, dtype=np.int64).reshape(-1)  # noqa: E731
    return pred, np.int64(first), tuple(map(as_arr, c56)), tuple(map(as_arr, small))


def median_bnb(profile: Profile, k: int, constraints: ConstraintSet | None = None) -> MedianResult:
    """Branch and bound; ``constraints=None`` runs the rules first.

    Pass an empty ``ConstraintSet(profile.n)`` to search without pruning rules.
    """
    _check_k(k)
    n = profile.n
    if n > BNB_MAX_N:
        raise SolverLimitError(f"branch and bound is limited to n <= {BNB_MAX_N}, got n={n}")
    if constraints is None:
        constraints = run_all_rules(profile)
    elif constraints.n != n:
        raise ValueError(f"constraints are for {constraints.n} candidates, profile has {n}")
    constraints.close()
    start = time.perf_counter()
    before, top = _tallies(profile, k)
    votes = profile.orders()
    upper = int(kernels.score_orders(votes, before, top, profile.m, k).min())
    pred, first, c56, small = compile_constraints(constraints, k)
    best, order, nodes = kernels.bnb_search(
        before, top, profile.m, k, n, upper, pred, first, c56, small
    )
    if best > upper:
        raise RuntimeError(
            "branch and bound pruned every ranking; the constraint set is inconsistent with the profile"
        )
    return MedianResult(
        scheme=k,
        optimal_score=int(best),
        medians=(Ranking(tuple(int(c) for c in order)),),
        complete=False,
        solver="bnb",
        stats={"seconds": time.perf_counter() - start, "nodes": nodes},
    )
