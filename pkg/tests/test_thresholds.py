import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from setwise_kemeny import thresholds as th


def test_exact_identities():
    assert th.condorcet_3wise(4) == Fraction(7, 10)
    assert th.condorcet_3wise(8) == Fraction(19, 26)
    assert th.condorcet_3wise(9) == Fraction(22, 30)
    assert th.unanimity_3wise(2) == Fraction(1, 2)
    assert th.unanimity_3wise(3) == Fraction(3, 4)
    assert th.unanimity_3wise(4) == Fraction(7, 8)
    assert th.unanimity_3wise(5) == Fraction(13, 14)
    assert th.extended_always(12) == Fraction(11, 12)
    assert th.l_of_s(0.72) == pytest.approx(18)


@pytest.mark.parametrize("n", range(2, 60))
def test_monotone_and_bounded(n):
    assert th.condorcet_3wise(n) < th.condorcet_3wise(n + 1) < Fraction(3, 4)
    assert th.unanimity_3wise(n) < th.unanimity_3wise(n + 1) < 1
    if n >= 4:
        assert th.unanimity_3wise(n) >= th.extended_always(n)


@given(st.fractions(min_value=Fraction(1, 2), max_value=Fraction(749, 1000), max_denominator=1000))
def test_exact_bound_matches_float(s):
    real = th.n_of_s(s)
    floor_n = th.floor_n_of_s(s)
    assert th.n_within_bound(floor_n, s)
    assert not th.n_within_bound(floor_n + 1, s)
    # away from integer boundaries the float agrees
    if abs(real - round(real)) > 1e-9:
        assert floor_n == math.floor(real)


@given(st.integers(2, 200), st.fractions(min_value=Fraction(1, 2), max_value=Fraction(3, 4)))
def test_bound_monotone_in_n(n, s):
    if th.n_within_bound(n + 1, s):
        assert th.n_within_bound(n, s)


def test_bound_at_three_quarters_is_unbounded():
    assert th.floor_n_of_s(Fraction(3, 4)) is None
    assert math.isinf(th.n_of_s(0.75))
    assert all(th.n_within_bound(n, Fraction(3, 4)) for n in range(1, 500))


def test_n_of_point_six_is_exactly_three():
    assert th.floor_n_of_s(Fraction(3, 5)) == 3
    assert th.n_within_bound(3, Fraction(3, 5))


def test_s_majority_q_examples():
    # smallest s admitting six candidates is 63/88 = 0.7159...; q there is 8/11 = 0.7273
    s6 = Fraction(63, 88)
    assert th.n_within_bound(6, s6) and not th.n_within_bound(6, s6 - Fraction(1, 10**6))
    assert th.s_majority_q(s6, 6) == Fraction(8, 11)
    assert th.s_majority_q(Fraction(3, 4), 6) == Fraction(3, 2) - Fraction(3, 4) - Fraction(1, 20)


@pytest.mark.parametrize("n, b, ok", [(6, 0, True), (14, 6, True), (14, 3, False), (2, 0, False), (10, 4, True), (10, 1, False)])
def test_nb_admissible(n, b, ok):
    assert th.nb_admissible(n, b) is ok


def test_lambda_threshold():
    assert th.lambda_threshold(1) == Fraction(6, 7)
    assert th.lambda_threshold(Fraction(1, 2)) == Fraction(7, 8)
