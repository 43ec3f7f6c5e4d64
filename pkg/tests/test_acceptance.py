"""The eight acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary, and
then asserts. Failing cells are listed in the line rather than hidden.
"""

import time
from fractions import Fraction
from itertools import permutations

import numpy as np

from conftest import ACCEPTANCE_LINES
from setwise_kemeny import (
    Ranking,
    distance_fast,
    distance_oracle,
    median_bnb,
    median_bruteforce,
    median_dp,
    run_all_rules,
    swap_delta,
)
from setwise_kemeny import sim
from setwise_kemeny import thresholds as th
from setwise_kemeny.paperlab import (
    gen_two_thirds_construction,
    get_instance,
    instance_catalog,
    load_profile,
    min_duel_ratio,
    verify_paper,
    verify_threshold_tables,
    verify_two_thirds_local_swaps,
)
from setwise_kemeny.paperlab.two_thirds import chain_forced, duel_ratio_bound, t_min_duel_ratio
from setwise_kemeny.reduce import conditional_violations, rule_condorcet_3wise

from _profiles import mixed_profiles


def record(num: int, title: str, ok: bool, detail: str):
    ACCEPTANCE_LINES[num] = f"{'PASS' if ok else 'FAIL'}  [{num}] {title}: {detail}"


def labels(p, rankings) -> set[str]:
    return {r.format(p.candidates) for r in rankings}


def vote(p, i) -> str:
    return p.votes[i][0].format(p.candidates)


def test_1_reference_instances():
    t0 = time.perf_counter()
    bad = []

    def expect(name, got, want):
        if got != want:
            bad.append(f"{name}: {got!r} != {want!r}")

    p = load_profile("condorcet_loser")
    r = median_bruteforce(p, 3)
    expect("CONDORCET_LOSER score", r.optimal_score, 48)
    expect("CONDORCET_LOSER medians", labels(p, r.medians), {"z > t > x > y"})

    p = load_profile("lower_3_5")
    r = median_bruteforce(p, 3)
    expect("LOWER_3_5 score", r.optimal_score, 21)
    expect("LOWER_3_5 medians", labels(p, r.medians), {vote(p, i) for i in range(4)})

    p = load_profile("lower_5_8")
    r = median_bruteforce(p, 3)
    expect("LOWER_5_8 score", r.optimal_score, 36)
    expect("LOWER_5_8 medians", labels(p, r.medians), {vote(p, 0), vote(p, 2)})

    p = load_profile("smith_iia")
    r = median_bruteforce(p, 3)
    expect("SMITH_IIA score", r.optimal_score, 114)
    expect("SMITH_IIA unique", r.unique, True)
    sub = p.restrict(["x1", "x2", "x3", "x4", "x5"])
    rs = median_bruteforce(sub, 3)
    expect("SMITH_IIA post-deletion winner", {sub.label(m.order[0]) for m in rs.medians}, {"x2"})

    p = load_profile("nine_cand")
    r = median_bruteforce(p, 3)
    expect("NINE_CAND score", r.optimal_score, 1904)
    expect("NINE_CAND medians", labels(p, r.medians), {vote(p, 0)})
    expect("NINE_CAND x4 ratio", min_duel_ratio(p, "x4"), Fraction(28, 43))

    for inst in instance_catalog():
        bad.extend(c.line() for c in inst.verify() if not c.passed)
    elapsed = time.perf_counter() - t0
    if elapsed >= 60:
        bad.append(f"runtime {elapsed:.1f}s >= 60s")
    ok = not bad
    record(1, "reference-instance regression", ok, f"{elapsed:.1f}s" if ok else "; ".join(bad))
    assert ok, bad


def test_2_threshold_tables():
    checks = verify_threshold_tables()
    failed = [c for c in checks if not c.passed]
    ok = not failed
    detail = f"{len(checks) - len(failed)}/{len(checks)} cells within 0.0005"
    if failed:
        detail += "; failing: " + "; ".join(
            f"{c.group} {c.name} printed {c.expected} exact {c.computed}" for c in failed
        )
    record(2, "threshold tables", ok, detail)
    assert ok, detail


def test_3_oracle_equivalence():
    mismatches = 0
    pairs = 0
    for n in range(1, 6):
        perms = [Ranking(p) for p in permutations(range(n))]
        for k in (2, 3):
            if k > max(n, 2):
                continue
            for a in perms:
                for b in perms:
                    pairs += 1
                    mismatches += distance_fast(a, b, k) != distance_oracle(a, b, k)
    rng = np.random.default_rng(2718)
    for _ in range(1000):
        n = int(rng.integers(3, 9))
        a, b = Ranking(tuple(rng.permutation(n))), Ranking(tuple(rng.permutation(n)))
        for k in (2, 3):
            pairs += 1
            mismatches += distance_fast(a, b, k) != distance_oracle(a, b, k)
    ok = mismatches == 0
    record(3, "oracle equivalence", ok, f"{mismatches} mismatches over {pairs} (pair, k) checks")
    assert ok


def test_4_solver_cross_validation():
    t0 = time.perf_counter()
    mismatches = []
    count = 0
    for n in range(3, 8):
        for m in range(3, 10):
            for i, p in enumerate(mixed_profiles(200, (n, n), (m, m), seed=1000 * n + m)):
                for k in (2, 3):
                    b = median_bruteforce(p, k, all_medians=False).optimal_score
                    d = median_dp(p, k).optimal_score
                    s = median_bnb(p, k).optimal_score
                    count += 1
                    if not b == d == s:
                        mismatches.append((n, m, i, k, b, d, s))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 300
    detail = f"{len(mismatches)} mismatches over {count} solves, {elapsed:.0f}s"
    if mismatches:
        detail += f"; first {mismatches[:3]}"
    record(4, "solver cross-validation", ok, detail)
    assert ok, detail


def test_5_reduction_soundness():
    violations = []
    forced = certified = 0
    for i, p in enumerate(mixed_profiles(500, (2, 6), (1, 9), seed=5)):
        cs = run_all_rules(p)
        for k in (2, 3):
            meds = median_bruteforce(p, k).medians
            for (x, y), rules in cs.forced[k].items():
                forced += 1
                if not all(r.prefers(x, y) for r in meds):
                    violations.append((i, k, "pair", x, y, sorted(rules)))
            allowed = cs.allowed_winners(k)
            certified += len(cs.winners[k]) + len(cs.winner_sets[k])
            if not all(r.order[0] in allowed for r in meds):
                violations.append((i, k, "winner"))
            if k == 3:
                for r in meds:
                    report = conditional_violations(p, r)
                    if report:
                        violations.append((i, k, "conditional", report[0].rule))
    ok = not violations
    detail = f"{len(violations)} violations; {forced} forced pairs and {certified} winner certificates checked"
    if violations:
        detail += f"; first {violations[:3]}"
    record(5, "reduction soundness", ok, detail)
    assert ok, detail


# grid points under test; the seed was fixed before any result was seen
CRITERION_6 = [(3, 3), (3, 4), (3, 7), (4, 5), (5, 6), (10, 11)]
CRITERION_6_SEED = 1


def test_6_applicability_grid():
    t0 = time.perf_counter()
    cells = []
    failing = []
    bits_equal = True
    for n, m in CRITERION_6:
        rep = sim.applicability(sim.SimConfig(n, m, 100_000, CRITERION_6_SEED), keep_bits=True)
        published = sim.PAPER_GRID[(n, m)]
        for rule, target in zip(sim.RULES, published):
            rate = rep.rates[rule]
            z = (rate.percentage - target) / rate.sigma_for(target)
            cells.append(abs(z) <= 3)
            if abs(z) > 3:
                failing.append(f"({n},{m}) {rule} measured {rate.percentage:.3f} published {target} ({z:+.3f} sigma)")
        if (n, m) in ((3, 3), (3, 4)):
            bits_equal &= bool(np.array_equal(rep.bits[:, 0], rep.bits[:, 2]))
    elapsed = time.perf_counter() - t0
    ok = not failing and bits_equal and elapsed < 600
    detail = f"{sum(cells)}/{len(cells)} cells within 3 sigma, AT=3AT bits {'equal' if bits_equal else 'DIFFER'}, {elapsed:.0f}s"
    if failing:
        detail += "; failing: " + "; ".join(failing)
    record(6, "applicability grid reproduction", ok, detail)
    assert ok, detail


def test_7_two_thirds_construction():
    bad = []
    samples = 10_000
    for n in (33, 40, 50):
        p = gen_two_thirds_construction(n)
        if t_min_duel_ratio(p) != duel_ratio_bound(n):
            bad.append(f"n={n} duel ratio {t_min_duel_ratio(p)}")
        if not chain_forced(p):
            bad.append(f"n={n} chain not forced")
        rep = verify_two_thirds_local_swaps(p, samples=samples, seed=n)
        if not rep.passed:
            bad.append(f"n={n} non-negative swaps {rep.shape1_nonnegative}/{rep.shape2_nonnegative}")
    notes = [c.note for c in verify_paper("TWO_THIRDS", samples=50) if c.note]
    if not any("no full median search" in note for note in notes):
        bad.append("limitation not stated in the verify-paper report")
    # spot check that the sampled deltas are real swap_delta values
    p = gen_two_thirds_construction(33)
    idx = p.candidates.index
    chain = [idx[f"u{i}"] for i in range(1, 34)] + [idx[c] for c in ("p1", "p2", "p3")]
    core = [idx[c] for c in ("x", "t", "z", "y")]
    pi = Ranking(tuple(core + chain))
    star = Ranking(tuple([core[0], core[2], core[1], core[3]] + chain))
    if not swap_delta(pi, star, p, 3) < 0:
        bad.append("z/predecessor swap did not improve")
    ok = not bad
    record(7, "2/3-construction properties", ok, f"n in (33, 40, 50), {samples} swaps per shape each" if ok else "; ".join(bad))
    assert ok, bad


def test_8_condorcet_non_firing():
    p = get_instance("NINE_CAND").profile
    x4 = p.candidates.index["x4"]
    margin = min_duel_ratio(p, "x4")
    fires = x4 in rule_condorcet_3wise(p).winners[3]
    winners = {m.order[0] for m in median_bruteforce(p, 3).medians}
    ok = margin == Fraction(28, 43) < th.condorcet_3wise(9) == Fraction(22, 30) and not fires and x4 not in winners
    detail = (
        f"x4 wins duels at {margin} < f(9) = {th.condorcet_3wise(9)}, rule fires: {fires}, "
        f"exhaustive winners {sorted(p.label(w) for w in winners)}"
    )
    record(8, "Condorcet non-firing", ok, detail)
    assert ok, detail
