import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setwise_kemeny import median_bruteforce, run_all_rules
from setwise_kemeny import thresholds as th
from setwise_kemeny.model import parse_profile
from setwise_kemeny.paperlab import (
    asset_text,
    gen_two_thirds_construction,
    get_instance,
    instance_catalog,
    instance_ids,
    load_profile,
    majority_example,
    verify_paper,
    verify_two_thirds_local_swaps,
)
from setwise_kemeny.paperlab import tables
from setwise_kemeny.paperlab.two_thirds import chain_forced, chain_pairs, duel_ratio_bound, t_min_duel_ratio
from setwise_kemeny.reduce import rule_condorcet_3wise


@pytest.mark.parametrize("inst", instance_catalog(), ids=lambda i: i.id)
def test_instance_claims(inst):
    for check in inst.verify():
        assert check.passed, check.line()


def test_instance_lookup():
    assert set(instance_ids()) == {
        "CONDORCET_LOSER",
        "REVERSAL",
        "LOWER_3_5",
        "LOWER_5_8",
        "NINE_CAND",
        "SMITH_IIA",
        "MAJORITY_EXAMPLE",
    }
    assert get_instance("lower-3-5").id == "LOWER_3_5"
    with pytest.raises(KeyError):
        get_instance("nope")
    with pytest.raises(KeyError):
        verify_paper("nope")


def test_assets_parse_and_round_trip():
    for name in ("condorcet_loser", "reversal", "lower_3_5", "lower_5_8", "nine_cand", "smith_iia", "majority_example"):
        p = load_profile(name)
        assert parse_profile(asset_text(name)) == p


def test_election_sizes():
    sizes = {i.id: (i.profile.n, i.profile.m) for i in instance_catalog()}
    assert sizes["CONDORCET_LOSER"] == (4, 11)
    assert sizes["LOWER_3_5"] == (3, 10)
    assert sizes["LOWER_5_8"] == (4, 8)
    assert sizes["NINE_CAND"] == (9, 43)
    assert sizes["SMITH_IIA"] == (8, 4)


def test_nine_candidate_x4_not_certified():
    p = load_profile("nine_cand")
    assert not rule_condorcet_3wise(p).winners[3]
    assert Fraction(28, 43) < th.condorcet_3wise(9)


# ---------------------------------------------------------------- majority example


@settings(max_examples=25)
@given(st.integers(1, 3), st.integers(0, 3), st.data())
def test_majority_vote_unique_median_any_blocks(m, n, data):
    blocks = [data.draw(st.permutations(range(n))) for _ in range(m)]
    p = majority_example(m, n, blocks)
    assert p.m == 2 * m + 1
    for k in (2, 3):
        res = median_bruteforce(p, k)
        assert res.unique
        assert res.median.format(p.candidates) == " > ".join(["w", *(f"z{i}" for i in range(1, n + 1)), "x", "y"])


def test_majority_example_validation():
    with pytest.raises(ValueError):
        majority_example(2, 2, [[0, 1]])
    with pytest.raises(ValueError):
        majority_example(1, 2, [[0, 0]])


# ---------------------------------------------------------------- 2/3 construction


@pytest.mark.parametrize("n", range(33, 51))
def test_two_thirds_structure(n):
    p = gen_two_thirds_construction(n)
    assert (p.n, p.m) == (n + 7, 3 * n - 8)
    assert t_min_duel_ratio(p) == duel_ratio_bound(n) == Fraction(2 * n - 8, 3 * n - 8)
    assert duel_ratio_bound(n) > Fraction(2, 3) - Fraction(1, n)
    assert chain_forced(p)
    assert len(chain_pairs(p)) == n + 2
    # t wins every duel yet no rule may certify it; z, the true winner, stays allowed
    cs = run_all_rules(p)
    idx = p.candidates.index
    assert idx["t"] not in cs.winners[3]
    assert idx["z"] in cs.allowed_winners(3)


@pytest.mark.parametrize("n", [33, 37, 45])
def test_two_thirds_swaps_improve(n):
    rep = verify_two_thirds_local_swaps(gen_two_thirds_construction(n), samples=400, seed=n)
    assert rep.passed
    assert rep.shape1_max_delta <= rep.shape1_bound == 32 - n
    assert rep.shape2_max_delta <= rep.shape2_bound == -48


def test_two_thirds_guards():
    with pytest.raises(ValueError):
        gen_two_thirds_construction(32)
    p = load_profile("nine_cand")
    with pytest.raises(ValueError):
        verify_two_thirds_local_swaps(p)


def test_two_thirds_bound_tends_to_two_thirds():
    assert duel_ratio_bound(10**6) == pytest.approx(2 / 3, abs=1e-6)
    assert all(duel_ratio_bound(n) < duel_ratio_bound(n + 1) for n in range(33, 200))


# ---------------------------------------------------------------- tables


def n_of_t_float(t: float) -> float:
    return (math.sqrt((1 - t) * (7 - 9 * t)) + 4 - 5 * t) / (3 - 4 * t)


@pytest.mark.parametrize("t", list(tables.OPTIMALITY_TABLE))
def test_optimality_row_matches_float_oracle(t):
    s, n, l2, ratio = tables.optimality_row(t)
    tf = float(t)
    nt = n_of_t_float(tf)
    s_float = 1.5 - tf - (1 - tf) / (nt - 1)
    assert float(s) == pytest.approx(s_float, abs=1e-12)
    assert n == math.floor(nt + 1e-12)
    assert l2 == math.ceil(3 * s_float / (3 - 4 * s_float)) + 2
    assert float(ratio) == pytest.approx((3 * s_float / (3 - 4 * s_float) + 2) / nt, rel=1e-12)


def test_table_checks_cover_every_cell():
    checks = tables.verify_threshold_tables()
    rows = (
        len(tables.ALWAYS_TABLE)
        + len(tables.CONDORCET_TABLE)
        + len(tables.UNANIMITY_TABLE)
        + 4 * len(tables.OPTIMALITY_TABLE)
        + 1
    )
    assert len(checks) == rows == 72
    for c in checks:
        if c.group in ("ALWAYS_TABLE", "CONDORCET_TABLE"):
            assert c.passed, c.line()
        if c.name.startswith(("n at", "l+2 at", "4 < ")) or c.name.startswith("l("):
            assert c.passed, c.line()


def test_check_line_format():
    c = verify_paper("LOWER_3_5")[0]
    assert c.line().startswith("PASS  LOWER_3_5: ")
    assert "expected=" in c.line() and "computed=" in c.line()
