"""k-wise Kendall-tau distances.

The k-wise distance counts the subsets S with 2 <= |S| <= k on which two
rankings disagree about the top element. Singletons never disagree and are
skipped everywhere, so the exhaustive oracle and the counting formulas agree
subset for subset.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

from . import kernels
from .model import Profile, Ranking


def _check_pair(pi: Ranking, sigma: Ranking):
    if pi.n != sigma.n:
        raise ValueError(f"rankings over different candidate sets ({pi.n} vs {sigma.n})")


def distance_oracle(pi: Ranking, sigma: Ranking, k: int) -> int:
    """Exhaustive subset enumeration. Slow; use only as a reference."""
    _check_pair(pi, sigma)
    n = pi.n
    if not 2 <= k <= max(n, 2):
        raise ValueError(f"k must satisfy 2 <= k <= n, got k={k}, n={n}")
    disagree = 0
    for size in range(2, min(k, n) + 1):
        for subset in combinations(range(n), size):
            if pi.top(subset) != sigma.top(subset):
                disagree += 1
    return disagree


def distance_fast(pi: Ranking, sigma: Ranking, k: int) -> int:
    """Counting formula for k in {2, 3}.

    k=2 is the inversion count. For k=3 a triple agrees on its top z exactly
    when both other members follow z in both rankings, so the triple part is
    C(n,3) - sum_z C(a_z, 2) with a_z = #candidates after z in both rankings.
    """
    _check_pair(pi, sigma)
    if k not in (2, 3):
        raise ValueError(f"fast formula only exists for k in {{2, 3}}, got {k}")
    p = np.asarray(pi.position)
    s = np.asarray(sigma.position)
    after_p = p[:, None] < p[None, :]
    after_s = s[:, None] < s[None, :]
    inversions = int(np.count_nonzero(after_p & ~after_s))
    if k == 2:
        return inversions
    common = np.count_nonzero(after_p & after_s, axis=1)
    agree = int(sum(comb(int(a), 2) for a in common))
    return inversions + comb(pi.n, 3) - agree


def profile_distance(pi: Ranking, profile: Profile, k: int) -> int:
    """Sum of k-wise distances from ``pi`` to every vote (with multiplicity).

    For k in {2, 3} this reads the pair and triple tallies instead of the
    votes; larger k falls back to the exhaustive oracle per distinct vote.
    """
    if pi.n != profile.n:
        raise ValueError(f"ranking has {pi.n} candidates, profile has {profile.n}")
    if k in (2, 3):
        return int(score_many([pi.order], profile, k)[0])
    return sum(mult * distance_oracle(pi, vote, k) for vote, mult in profile.votes)


def score_many(orders, profile: Profile, k: int) -> np.ndarray:
    """Vectorised :func:`profile_distance` over rows of ``orders`` (k in {2, 3})."""
    top = profile.triple_tally().top if k == 3 else _NO_TRIPLES
    return kernels.score_orders(orders, profile.pair_tally().before, top, profile.m, k)


# placeholder with the right dtype/ndim for k=2 kernel calls
_NO_TRIPLES = np.zeros((1, 1, 1), dtype=np.int64)


def swap_delta(pi: Ranking, pi_star: Ranking, profile: Profile, k: int) -> int:
    """``profile_distance(pi_star) - profile_distance(pi)``; negative means pi_star is better."""
    return profile_distance(pi_star, profile, k) - profile_distance(pi, profile, k)
