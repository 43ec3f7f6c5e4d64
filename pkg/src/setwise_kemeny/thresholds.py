"""Threshold functions of the reduction rules.

Rational thresholds are returned as :class:`~fractions.Fraction`. The bound
n(s) involves a square root; it is evaluated in floating point only for
display, and membership ``n <= n(s)`` is decided by the equivalent quadratic
inequality in exact arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .model import as_ratio

THREE_QUARTERS = Fraction(3, 4)
HALF = Fraction(1, 2)


def extended_always(n: int) -> Fraction:
    """1 - 1/n: 2-wise pair threshold (strict)."""
    return 1 - Fraction(1, n)


def condorcet_3wise(n: int) -> Fraction:
    """f(n) = (3n-5)/(4n-6): 3-wise winner threshold (strict), n >= 2."""
    return Fraction(3 * n - 5, 4 * n - 6)


def unanimity_3wise(n: int) -> Fraction:
    """g(n) = 1 - 1/(n^2-3n+4): 3-wise pair threshold (strict)."""
    return 1 - Fraction(1, n * n - 3 * n + 4)


def l_of_s(s) -> float:
    """Candidate count 3s/(3-4s) of the classical counterexample family."""
    s = float(s)
    return 3 * s / (3 - 4 * s)


def n_of_s(s) -> float:
    """Largest admissible candidate count (real-valued) for threshold s < 3/4."""
    s = float(s)
    if s >= 0.75:
        return math.inf
    return (math.sqrt((1 - s) * (7 - 9 * s)) + 4 - 5 * s) / (3 - 4 * s)


def n_within_bound(n: int, s) -> bool:
    """Exact test of ``n <= n(s)``.

    With u = n - 1 this is (3-4s)u^2 - (2-2s)u - 2 + 2s <= 0; the quadratic
    is negative at u=0 with non-negative leading coefficient, so the test is
    monotone in n.
    """
    s = as_ratio(s)
    u = n - 1
    return (3 - 4 * s) * u * u - (2 - 2 * s) * u - 2 + 2 * s <= 0


def floor_n_of_s(s) -> int | None:
    """floor(n(s)) decided exactly; ``None`` when unbounded (s >= 3/4)."""
    s = as_ratio(s)
    if s >= THREE_QUARTERS:
        return None
    guess = max(1, int(math.floor(n_of_s(s))))
    n = max(1, guess - 2)
    while n_within_bound(n + 1, s):
        n += 1
    while n > 1 and not n_within_bound(n, s):
        n -= 1
    return n


def s_of_t(t) -> float:
    """s(t, n(t)) = 3/2 - t - (1-t)/(n(t)-1)."""
    t = float(t)
    return 1.5 - t - (1 - t) / (n_of_s(t) - 1)


def s_majority_q(s, n: int) -> Fraction:
    """Pair threshold 3/2 - s + (s-1)/(n-1) of the extended s-majority rule."""
    s = as_ratio(s)
    return Fraction(3, 2) - s + (s - 1) / (n - 1)


def lambda_threshold(lam) -> Fraction:
    """Smallest s allowed by the lambda form of the 5/6 rule: (5l+1)/(6l+1)."""
    lam = as_ratio(lam)
    return (5 * lam + 1) / (6 * lam + 1)


def nb_admissible(n: int, b: int) -> bool:
    """(n-b-2)(n-b-6) <= 3b with n >= 3."""
    return n >= 3 and (n - b - 2) * (n - b - 6) <= 3 * b
