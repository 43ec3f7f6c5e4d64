"""Search-space reduction rules for 2-wise and 3-wise Kemeny medians.

Each unconditional rule returns a :class:`ConstraintSet` of certified facts
about *every* median of one scheme: forced pairs "x before y", certified
winners, and winner sets. Conditional rules take a complete ranking and
return the list of violated conclusions; a non-empty report proves that
ranking is not a 3-wise median.

Inequality strictness per rule (all exact integer cross-multiplication):

===============================  ==========================================
extended Always (2-wise)         before[x,y] / m  >  1 - 1/n
extended unanimity (3-wise)      before[x,y] / m  >  g(n)
extended s-majority (2-wise)     before[x,y] / m  >  3/2 - s + (s-1)/(n-1)
3/4-Condorcet (3-wise)           before[x,y] / m  >  f(n), or >= 3/4
majority criterion (any k)       first-place votes  >  m/2
3/4-Smith, 3/4-XCC (3-wise)      before[x,y] / m  >= 3/4
5/6-majority (conditional)       before / m  >= s  (s >= 5/6)
===============================  ==========================================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from . import thresholds as th
from .distance import profile_distance
from .model import MedianResult, Profile, Ranking, as_ratio, exceeds, reaches

SCHEMES = (2, 3)
FIVE_SIXTHS = Fraction(5, 6)


class ConstraintCycleError(RuntimeError):
    """Forced pairs of one scheme contain a cycle; names the rules involved."""

    def __init__(self, scheme: int, rules: set[str], cycle: list[int]):
        self.scheme = scheme
        self.rules = rules
        self.cycle = cycle
        super().__init__(
            f"{scheme}-wise forced pairs contain a cycle through candidates {cycle}; "
            f"rules involved: {', '.join(sorted(rules))}"
        )


class NonUniqueSmithSetError(ValueError):
    pass


# ---------------------------------------------------------------- conditional premises


@dataclass(frozen=True)
class FiveSixthsPremise:
    """Non-dirty x at threshold s (main form, s >= 5/6)."""

    x: int
    dominators: frozenset[int]
    dominated: frozenset[int]
    s: Fraction


@dataclass(frozen=True)
class ShapePremise:
    """z >=3/4 x and x >=3/4 every other candidate."""

    x: int
    z: int


@dataclass(frozen=True)
class SixCandidatePremise:
    """n = 6, x non-dirty at 3/4 with at most two 3/4-dominators."""

    x: int
    above: frozenset[int]
    below: frozenset[int]


@dataclass(frozen=True)
class Violation:
    rule: str
    x: int
    y: int
    detail: str
    improved: Ranking | None = None


# ---------------------------------------------------------------- constraint set


@dataclass
class ConstraintSet:
    n: int
    forced: dict[int, dict[tuple[int, int], set[str]]] = field(
        default_factory=lambda: {k: {} for k in SCHEMES}
    )
    winners: dict[int, dict[int, set[str]]] = field(default_factory=lambda: {k: {} for k in SCHEMES})
    winner_sets: dict[int, list[tuple[frozenset[int], str]]] = field(
        default_factory=lambda: {k: [] for k in SCHEMES}
    )
    conditional: list = field(default_factory=list)

    def add_pair(self, scheme: int, x: int, y: int, rule: str):
        self.forced[scheme].setdefault((x, y), set()).add(rule)

    def add_winner(self, scheme: int, x: int, rule: str):
        self.winners[scheme].setdefault(x, set()).add(rule)
        for y in range(self.n):
            if y != x:
                self.add_pair(scheme, x, y, rule)

    def add_winner_set(self, scheme: int, members: Iterable[int], rule: str):
        self.winner_sets[scheme].append((frozenset(members), rule))

    def pairs(self, scheme: int) -> set[tuple[int, int]]:
        return set(self.forced[scheme])

    def merge(self, other: "ConstraintSet") -> "ConstraintSet":
        for k in SCHEMES:
            for pair, rules in other.forced[k].items():
                self.forced[k].setdefault(pair, set()).update(rules)
            for x, rules in other.winners[k].items():
                self.winners[k].setdefault(x, set()).update(rules)
            self.winner_sets[k].extend(other.winner_sets[k])
        self.conditional.extend(other.conditional)
        return self

    def allowed_winners(self, scheme: int) -> frozenset[int]:
        allowed = set(range(self.n))
        for members, _ in self.winner_sets[scheme]:
            allowed &= members
        for x in self.winners[scheme]:
            allowed &= {x}
        return frozenset(allowed)

    def is_empty(self) -> bool:
        return not any(self.forced[k] or self.winner_sets[k] for k in SCHEMES)

    def close(self) -> "ConstraintSet":
        """Transitively close each scheme; raise on a cycle."""
        for k in SCHEMES:
            reach = np.zeros((self.n, self.n), dtype=bool)
            for x, y in self.forced[k]:
                reach[x, y] = True
            for w in range(self.n):
                reach |= reach[:, w : w + 1] & reach[w : w + 1, :]
            diag = np.flatnonzero(np.diag(reach))
            if diag.size:
                comp = [int(c) for c in diag]
                rules = set()
                for (x, y), rs in self.forced[k].items():
                    if x in comp and y in comp:
                        rules |= rs
                raise ConstraintCycleError(k, rules, comp)
            for x, y in zip(*np.nonzero(reach)):
                pair = (int(x), int(y))
                if pair not in self.forced[k]:
                    self.forced[k][pair] = {"transitivity"}
        return self

    def pred_masks(self, scheme: int) -> np.ndarray:
        """``mask[c]`` has bit p set when p must precede c."""
        masks = np.zeros(self.n, dtype=np.int64)
        for x, y in self.forced[scheme]:
            masks[y] |= np.int64(1) << np.int64(x)
        return masks


def _new(profile: Profile) -> ConstraintSet:
    return ConstraintSet(profile.n)


def _tally(profile: Profile):
    return profile.pair_tally().before, profile.m


# ---------------------------------------------------------------- unconditional rules


def rule_extended_always_2wise(profile: Profile) -> ConstraintSet:
    """x before y in every 2-wise median when before[x,y]/m > 1 - 1/n (strict)."""
    out = _new(profile)
    before, m = _tally(profile)
    n = profile.n
    if n < 2:
        return out
    for x in range(n):
        for y in range(n):
            if x != y and int(before[x, y]) * n > (n - 1) * m:
                out.add_pair(2, x, y, "extended-always")
    return out


def rule_unanimity_3wise(profile: Profile) -> ConstraintSet:
    """x before y in every 3-wise median when before[x,y]/m > g(n) (strict)."""
    out = _new(profile)
    before, m = _tally(profile)
    n = profile.n
    if n < 2:
        return out
    q = n * n - 3 * n + 4
    for x in range(n):
        for y in range(n):
            if x != y and int(before[x, y]) * q > (q - 1) * m:
                out.add_pair(3, x, y, "extended-unanimity")
    return out


def s_majority_choice(profile: Profile, x: int) -> Fraction | None:
    """Largest s usable for candidate x in the extended s-majority rule.

    x is non-dirty for every s up to its margin min_y max(before[x,y],
    before[y,x]) / m. Candidates are the realized tally fractions in
    [1/2, 3/4] plus the margin itself capped at 3/4; the firing condition is
    piecewise constant between them.
    """
    before, m = _tally(profile)
    n = profile.n
    others = [y for y in range(n) if y != x]
    margin = Fraction(min(max(int(before[x, y]), int(before[y, x])) for y in others), m)
    cap = min(margin, th.THREE_QUARTERS)
    options = {Fraction(int(c), m) for c in np.unique(before)} | {cap}
    for s in sorted(options, reverse=True):
        if th.HALF <= s <= cap and th.n_within_bound(n, s):
            return s
    return None


def rule_extended_s_majority_2wise(profile: Profile) -> ConstraintSet:
    """Non-dirty x fixes its duels with before/m > 3/2 - s + (s-1)/(n-1) (strict)."""
    out = _new(profile)
    before, m = _tally(profile)
    n = profile.n
    if n < 3:
        return out
    for x in range(n):
        s = s_majority_choice(profile, x)
        if s is None:
            continue
        q = th.s_majority_q(s, n)
        for y in range(n):
            if y == x:
                continue
            if exceeds(int(before[x, y]), m, q):
                out.add_pair(2, x, y, "extended-s-majority")
            elif exceeds(int(before[y, x]), m, q):
                out.add_pair(2, y, x, "extended-s-majority")
    return out


def rule_condorcet_3wise(profile: Profile) -> ConstraintSet:
    """Certify x as 3-wise winner when every duel exceeds f(n), or reaches 3/4."""
    out = _new(profile)
    before, m = _tally(profile)
    n = profile.n
    if n < 2:
        return out
    f = th.condorcet_3wise(n)
    for x in range(n):
        if all(
            exceeds(int(before[x, y]), m, f) or reaches(int(before[x, y]), m, th.THREE_QUARTERS)
            for y in range(n)
            if y != x
        ):
            out.add_winner(3, x, "3/4-condorcet")
    return out


def first_place_counts(profile: Profile) -> np.ndarray:
    counts = np.zeros(profile.n, dtype=np.int64)
    for r, k in profile.votes:
        counts[r.order[0]] += k
    return counts


def rule_majority_criterion(profile: Profile, k: int) -> ConstraintSet:
    """A candidate ranked first by more than half the votes wins every k-wise median."""
    if k < 2:
        raise ValueError("k must be at least 2")
    out = _new(profile)
    counts = first_place_counts(profile)
    x = int(np.argmax(counts))
    if 2 * int(counts[x]) > profile.m and k in SCHEMES:
        out.add_winner(k, x, "majority-criterion")
    return out


def majority_criterion_winner(profile: Profile) -> int | None:
    counts = first_place_counts(profile)
    x = int(np.argmax(counts))
    return x if 2 * int(counts[x]) > profile.m else None


def rule_majority_vote_is_median(profile: Profile, k: int) -> MedianResult | None:
    """A ranking cast by more than half the votes is the unique k-wise median."""
    if k < 2:
        raise ValueError("k must be at least 2")
    for r, mult in profile.merged().items():
        if 2 * mult > profile.m:
            return MedianResult(
                scheme=k,
                optimal_score=profile_distance(r, profile, k),
                medians=(r,),
                complete=True,
                solver="majority-vote",
            )
    return None


def dominance_matrix(profile: Profile, alpha) -> np.ndarray:
    """``D[x, y]`` iff x >=_alpha y, i.e. before[x,y] >= alpha*m (non-strict)."""
    alpha = as_ratio(alpha)
    before, m = _tally(profile)
    dom = before * alpha.denominator >= alpha.numerator * m
    np.fill_diagonal(dom, False)
    return dom


def compute_alpha_smith_set(profile: Profile, alpha) -> frozenset[int]:
    """Smallest nonempty S with x >=_alpha y for all x in S, y outside S.

    The smallest dominant set containing x is the closure of x under edges
    x -> y for NOT(x >=_alpha y); the answer is the smallest such closure.
    """
    alpha = as_ratio(alpha)
    if alpha < th.HALF:
        raise ValueError(f"alpha-Smith sets are only defined here for alpha >= 1/2, got {alpha}")
    dom = dominance_matrix(profile, alpha)
    n = profile.n
    weak = ~dom
    np.fill_diagonal(weak, False)
    closures = set()
    for x in range(n):
        seen = {x}
        stack = [x]
        while stack:
            u = stack.pop()
            for v in np.flatnonzero(weak[u]):
                v = int(v)
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        closures.add(frozenset(seen))
    smallest = min(len(c) for c in closures)
    minimal = [c for c in closures if len(c) == smallest]
    if len(minimal) > 1:
        raise NonUniqueSmithSetError(
            f"{len(minimal)} distinct minimal dominant sets at alpha={alpha}"
        )
    return minimal[0]


def _smith_size_ok(size_i: int, size_j: int) -> bool:
    # 0 < |I| <= (|J| + 4) / 2
    return 0 < size_i and 2 * size_i <= size_j + 4


def rule_smith_3wise(profile: Profile) -> ConstraintSet:
    """The 3-wise winner lies in the 3/4-Smith set I when |I| <= (|C \\ I| + 4)/2."""
    out = _new(profile)
    smith = compute_alpha_smith_set(profile, th.THREE_QUARTERS)
    if len(smith) < profile.n and _smith_size_ok(len(smith), profile.n - len(smith)):
        out.add_winner_set(3, smith, "3/4-smith")
        if len(smith) == 1:
            out.add_winner(3, next(iter(smith)), "3/4-smith")
    return out


def xcc_partitions(profile: Profile, exhaustive: bool = False) -> list[frozenset[int]]:
    """All I with I >=3/4 (C \\ I) pairwise and the size gate satisfied.

    3/4-dominant sets form a chain and each is a prefix of the candidates
    sorted by how many others they 3/4-dominate, so checking every prefix cut
    is complete. ``exhaustive=True`` scans all 2^n subsets instead (n <= 16).
    """
    dom = dominance_matrix(profile, th.THREE_QUARTERS)
    n = profile.n
    if exhaustive:
        if n > 16:
            raise ValueError("exhaustive partition scan is limited to n <= 16")
        cuts = (
            frozenset(c for c in range(n) if (mask >> c) & 1) for mask in range(1, (1 << n) - 1)
        )
    else:
        order = sorted(range(n), key=lambda c: (-int(dom[c].sum()), c))
        cuts = (frozenset(order[:size]) for size in range(1, n))
    found = []
    for inside in cuts:
        outside = [y for y in range(n) if y not in inside]
        if not _smith_size_ok(len(inside), len(outside)):
            continue
        if all(dom[x, y] for x in inside for y in outside):
            found.append(inside)
    return found


def rule_xcc_3wise(profile: Profile, exhaustive: bool = False) -> ConstraintSet:
    out = _new(profile)
    for inside in xcc_partitions(profile, exhaustive=exhaustive):
        for x in inside:
            for y in range(profile.n):
                if y not in inside:
                    out.add_pair(3, x, y, "3/4-xcc")
    return out


# ---------------------------------------------------------------- conditional rules


def five_sixths_premises(profile: Profile, s=FIVE_SIXTHS) -> list[FiveSixthsPremise]:
    """Candidates that are non-dirty at threshold s, with their dominators/dominated."""
    s = as_ratio(s)
    dom = dominance_matrix(profile, s)
    out = []
    for x in range(profile.n):
        others = [y for y in range(profile.n) if y != x]
        if all(dom[x, y] or dom[y, x] for y in others):
            out.append(
                FiveSixthsPremise(
                    x,
                    frozenset(int(z) for z in np.flatnonzero(dom[:, x])),
                    frozenset(int(y) for y in np.flatnonzero(dom[x])),
                    s,
                )
            )
    return out


def _check_five_sixths(profile, ranking, premises, size_ok, rule):
    pos = ranking.position
    out = []
    for p in premises:
        if any(pos[z] > pos[p.x] for z in p.dominators):
            continue
        below = profile.n - 1 - pos[p.x]
        if not size_ok(len(p.dominators), below):
            continue
        for y in sorted(p.dominated):
            if pos[y] < pos[p.x]:
                out.append(
                    Violation(rule, p.x, y, f"{p.x} >=s {y} but {y} is ranked above {p.x}")
                )
    return out


def _check_ranking(profile: Profile, ranking: Ranking):
    if ranking.n != profile.n:
        raise ValueError(f"ranking has {ranking.n} candidates, profile has {profile.n}")


def rule_56_majority_conditional(
    profile: Profile, median_candidate: Ranking, lam=None, s=FIVE_SIXTHS
) -> list[Violation]:
    """Check the 5/6-majority conclusions on a putative 3-wise median.

    Main form (``lam=None``, s >= 5/6): needs |I|(|I|-4) <= 3|below x|.
    Lambda form: needs s >= (5l+1)/(6l+1) and |below x| >= l|I|.
    Here I is the set of s-dominators of x, all of which must precede x.
    """
    _check_ranking(profile, median_candidate)
    s = as_ratio(s)
    if lam is None:
        if s < FIVE_SIXTHS:
            raise ValueError(f"main form needs s >= 5/6, got {s}")

        def size_ok(i, below):
            return i * (i - 4) <= 3 * below

        rule = "5/6-majority"
    else:
        lam = as_ratio(lam)
        if lam <= 0:
            raise ValueError("lambda must be positive")
        if s < th.lambda_threshold(lam):
            raise ValueError(f"s={s} is below (5l+1)/(6l+1)={th.lambda_threshold(lam)}")

        def size_ok(i, below):
            return below >= lam * i

        rule = "5/6-majority-lambda"
    return _check_five_sixths(
        profile, median_candidate, five_sixths_premises(profile, s), size_ok, rule
    )


def rule_56_majority_nb(profile: Profile, median_candidate: Ranking, b: int) -> list[Violation]:
    """5/6-majority for medians A > x > B with |B| >= b, given (n-b-2)(n-b-6) <= 3b."""
    _check_ranking(profile, median_candidate)
    n = profile.n
    if not th.nb_admissible(n, b):
        raise ValueError(f"(n, b) = ({n}, {b}) violates n >= 3 and (n-b-2)(n-b-6) <= 3b")
    return _check_five_sixths(
        profile,
        median_candidate,
        five_sixths_premises(profile),
        lambda i, below: below >= b,
        "5/6-majority-nb",
    )


def shape_premises(profile: Profile) -> list[ShapePremise]:
    dom = dominance_matrix(profile, th.THREE_QUARTERS)
    n = profile.n
    out = []
    for x in range(n):
        for z in range(n):
            if z == x or not dom[z, x]:
                continue
            if all(dom[x, y] for y in range(n) if y not in (x, z)):
                out.append(ShapePremise(x, z))
    return out


def six_candidate_premises(profile: Profile) -> list[SixCandidatePremise]:
    if profile.n != 6:
        return []
    dom = dominance_matrix(profile, th.THREE_QUARTERS)
    out = []
    for x in range(6):
        above = frozenset(int(y) for y in np.flatnonzero(dom[:, x]))
        below = frozenset(y for y in range(6) if y != x and y not in above)
        if len(above) <= 2 and all(dom[x, z] for z in below):
            out.append(SixCandidatePremise(x, above, below))
    return out


def rule_small_election_pruning(profile: Profile, median_candidate: Ranking) -> list[Violation]:
    """Flag dominated ranking shapes for x with one 3/4-dominator z.

    (a) A z B x C with B nonempty    is beaten by A z x B C
    (b) A z x B with A nonempty      is beaten by z x A B
    (c) A x B z C, |B u C| = 5, |B| <= 2  is beaten by A z x B C
    plus, with exactly six candidates, the weak 3/4-majority rule for a
    non-dirty x with at most two 3/4-dominators.
    """
    _check_ranking(profile, median_candidate)
    order = list(median_candidate.order)
    pos = median_candidate.position
    n = profile.n
    out = []
    for p in shape_premises(profile):
        x, z = p.x, p.z
        if pos[z] < pos[x]:
            if pos[x] - pos[z] > 1:
                rest = [c for c in order if c != x]
                improved = rest[: rest.index(z) + 1] + [x] + rest[rest.index(z) + 1 :]
                out.append(
                    Violation("3/4-shape-a", x, z, "z B x with B nonempty", Ranking(tuple(improved)))
                )
            elif pos[z] > 0:
                rest = [c for c in order if c not in (x, z)]
                out.append(
                    Violation("3/4-shape-b", x, z, "A z x with A nonempty", Ranking((z, x, *rest)))
                )
        else:
            below_x = n - pos[x] - 2
            between = pos[z] - pos[x] - 1
            if below_x == 5 and between <= 2:
                rest = [c for c in order if c != z]
                i = rest.index(x)
                improved = rest[:i] + [z] + rest[i:]
                out.append(
                    Violation("3/4-shape-c", x, z, "x B z C with |B u C| = 5, |B| <= 2", Ranking(tuple(improved)))
                )
    for p in six_candidate_premises(profile):
        for y in sorted(p.above):
            if pos[y] > pos[p.x]:
                out.append(Violation("weak-3/4-six", y, p.x, f"{y} >=3/4 {p.x} but ranked below"))
        for y in sorted(p.below):
            if pos[y] < pos[p.x]:
                out.append(Violation("weak-3/4-six", p.x, y, f"{p.x} >=3/4 {y} but ranked below"))
    return out


def conditional_violations(profile: Profile, ranking: Ranking) -> list[Violation]:
    """Every conditional 3-wise check applicable to ``ranking``."""
    out = rule_56_majority_conditional(profile, ranking)
    out += rule_small_election_pruning(profile, ranking)
    return out


# ---------------------------------------------------------------- engine


def run_all_rules(profile: Profile) -> ConstraintSet:
    """Union of the unconditional rules per scheme, transitively closed.

    Conditional premises (5/6-majority, few-candidate shapes) are attached in
    ``conditional`` for the branch-and-bound solver.
    """
    out = _new(profile)
    out.merge(rule_extended_always_2wise(profile))
    out.merge(rule_extended_s_majority_2wise(profile))
    out.merge(rule_unanimity_3wise(profile))
    out.merge(rule_condorcet_3wise(profile))
    out.merge(rule_smith_3wise(profile))
    out.merge(rule_xcc_3wise(profile))
    for k in SCHEMES:
        out.merge(rule_majority_criterion(profile, k))
        result = rule_majority_vote_is_median(profile, k)
        if result is not None:
            order = result.median.order
            for i, x in enumerate(order):
                for y in order[i + 1 :]:
                    out.add_pair(k, x, y, "majority-vote")
    out.conditional.extend(five_sixths_premises(profile))
    out.conditional.extend(shape_premises(profile))
    out.conditional.extend(six_candidate_premises(profile))
    return out.close()
