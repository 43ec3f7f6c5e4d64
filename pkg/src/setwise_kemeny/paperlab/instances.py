"""Published elections with machine-checkable claims about them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Callable, Sequence

from ..model import Profile, parse_profile
from ..reduce import (
    compute_alpha_smith_set,
    majority_criterion_winner,
    rule_condorcet_3wise,
    rule_majority_vote_is_median,
    rule_smith_3wise,
)
from ..solve import median_bruteforce


@dataclass(frozen=True)
class Claim:
    name: str
    anchor: str
    expected: Any
    compute: Callable[[Profile], Any]


def show(value) -> str:
    if isinstance(value, (set, frozenset)):
        return "{" + "; ".join(sorted(map(str, value))) + "}"
    return str(value)


@dataclass(frozen=True)
class CheckResult:
    group: str
    name: str
    anchor: str
    expected: Any
    computed: Any
    passed: bool
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = (
            f"{status}  {self.group}: {self.name}  "
            f"expected={show(self.expected)}  computed={show(self.computed)}"
        )
        if self.note:
            text += f"  ({self.note})"
        return text


@dataclass(frozen=True)
class PaperInstance:
    id: str
    profile: Profile
    claims: tuple[Claim, ...] = field(default_factory=tuple)

    def verify(self) -> list[CheckResult]:
        out = []
        for claim in self.claims:
            computed = claim.compute(self.profile)
            out.append(
                CheckResult(
                    self.id, claim.name, claim.anchor, claim.expected, computed, computed == claim.expected
                )
            )
        return out


def load_profile(name: str) -> Profile:
    text = resources.files(__package__).joinpath("data", f"{name}.profile").read_text()
    return parse_profile(text)


def asset_text(name: str) -> str:
    return resources.files(__package__).joinpath("data", f"{name}.profile").read_text()


# ---------------------------------------------------------------- claim helpers
# Brute-force results are cached per (profile, k) since several claims of an
# instance read the same median set.


@lru_cache(maxsize=32)
def _brute(profile: Profile, k: int):
    return median_bruteforce(profile, k, all_medians=True)


def _score(k: int):
    return lambda p: _brute(p, k).optimal_score


def _median_set(k: int):
    return lambda p: frozenset(r.format(p.candidates) for r in _brute(p, k).medians)


def _winners(k: int):
    return lambda p: frozenset(p.label(r.order[0]) for r in _brute(p, k).medians)


def _labels(*rankings: str) -> frozenset[str]:
    return frozenset(" > ".join(tok.strip() for tok in r.split(">")) for r in rankings)


def _vote_labels(profile_name: str, indices: Sequence[int]) -> frozenset[str]:
    p = load_profile(profile_name)
    return frozenset(p.votes[i][0].format(p.candidates) for i in indices)


def min_duel_ratio(profile: Profile, label: str) -> Fraction:
    """Smallest fraction of votes in which ``label`` beats another candidate."""
    before = profile.pair_tally().before
    x = profile.candidates.index[label]
    return min(Fraction(int(before[x, y]), profile.m) for y in range(profile.n) if y != x)


def _condorcet_loser(profile: Profile) -> frozenset[str]:
    before = profile.pair_tally().before
    return frozenset(
        profile.label(z)
        for z in range(profile.n)
        if all(2 * int(before[z, y]) < profile.m for y in range(profile.n) if y != z)
    )


def _mirror(profile: Profile) -> Profile:
    return Profile(profile.candidates, tuple((r.reversed(), k) for r, k in profile.votes))


def _certified_3wise(profile: Profile) -> frozenset[str]:
    return frozenset(profile.label(x) for x in rule_condorcet_3wise(profile).winners[3])


def _smith(alpha):
    return lambda p: frozenset(p.label(c) for c in compute_alpha_smith_set(p, alpha))


def _smith_rule_fires(profile: Profile) -> bool:
    return bool(rule_smith_3wise(profile).winner_sets[3])


def _smith_subelection(profile: Profile) -> Profile:
    return profile.restrict(["x1", "x2", "x3", "x4", "x5"])


# ---------------------------------------------------------------- catalog


def majority_example(m: int = 2, n: int = 1, blocks: Sequence[Sequence[int]] | None = None) -> Profile:
    """pi: w > z1..zn > x > y cast m+1 times, plus m votes y > A_i > x > w.

    ``blocks[i]`` orders the z-block of the i-th scattered vote as indices
    into z1..zn; identity order when omitted.
    """
    if m < 1 or n < 0:
        raise ValueError("need m >= 1 and n >= 0")
    zs = [f"z{i}" for i in range(1, n + 1)]
    names = ["w", *zs, "x", "y"]
    if blocks is None:
        blocks = [list(range(n))] * m
    if len(blocks) != m:
        raise ValueError(f"expected {m} z-block orders, got {len(blocks)}")
    votes = [(m + 1, " > ".join(["w", *zs, "x", "y"]))]
    for block in blocks:
        if sorted(block) != list(range(n)):
            raise ValueError(f"z-block order {block} is not a permutation of 0..{n - 1}")
        votes.append((1, " > ".join(["y", *(zs[i] for i in block), "x", "w"])))
    return Profile.from_votes(names, votes)


def instance_catalog() -> list[PaperInstance]:
    loser = load_profile("condorcet_loser")
    return [
        PaperInstance(
            "CONDORCET_LOSER",
            loser,
            (
                Claim("3-wise optimal score", "d^3(r1, V) = 48", 48, _score(3)),
                Claim(
                    "3-wise median set",
                    "r1 is the unique 3-wise Kemeny median",
                    _labels("z > t > x > y"),
                    _median_set(3),
                ),
                Claim("Condorcet loser", "z <_{1/2} x, y, t", frozenset({"z"}), _condorcet_loser),
            ),
        ),
        PaperInstance(
            "REVERSAL",
            load_profile("reversal"),
            (
                Claim(
                    "is the mirror of CONDORCET_LOSER",
                    "mirrored election V'",
                    True,
                    lambda p: p.merged() == _mirror(loser).merged(),
                ),
                Claim(
                    "majority criterion winner",
                    "z wins 2+2+2=6 votes out of 11",
                    "z",
                    lambda p: None if (w := majority_criterion_winner(p)) is None else p.label(w),
                ),
                Claim("3-wise winners", "z must be the winner in every 3-wise median", frozenset({"z"}), _winners(3)),
            ),
        ),
        PaperInstance(
            "LOWER_3_5",
            load_profile("lower_3_5"),
            (
                Claim("x min duel ratio", "x >=_{3/5} y and x >=_{3/5} z", Fraction(3, 5), lambda p: min_duel_ratio(p, "x")),
                Claim("3-wise optimal score", "d^3(r_i, V) = 21", 21, _score(3)),
                Claim(
                    "3-wise median set",
                    "r1, r2, r3, r4 are all the 3-wise medians",
                    _vote_labels("lower_3_5", [0, 1, 2, 3]),
                    _median_set(3),
                ),
            ),
        ),
        PaperInstance(
            "LOWER_5_8",
            load_profile("lower_5_8"),
            (
                # stated as t >_{5/8} x, y, z; each duel of t is in fact won at exactly 5/8
                Claim("t min duel ratio", "t >_{5/8} x, y, z", Fraction(5, 8), lambda p: min_duel_ratio(p, "t")),
                Claim("3-wise optimal score", "d^3(r1, V) = d^3(r3, V) = 36", 36, _score(3)),
                Claim(
                    "3-wise median set",
                    "r1 and r3 are the only 3-wise medians",
                    _vote_labels("lower_5_8", [0, 2]),
                    _median_set(3),
                ),
            ),
        ),
        PaperInstance(
            "NINE_CAND",
            load_profile("nine_cand"),
            (
                Claim("3-wise optimal score", "d^3(pi*, V) = 1904", 1904, _score(3)),
                Claim(
                    "3-wise median set",
                    "pi* = r1 is the unique 3-wise median",
                    _vote_labels("nine_cand", [0]),
                    _median_set(3),
                ),
                Claim("x4 min duel ratio", "the ratio 28/43 = 0.6511", Fraction(28, 43), lambda p: min_duel_ratio(p, "x4")),
                Claim("3/4-Condorcet certifies nobody", "28/43 < f(9)", frozenset(), _certified_3wise),
                Claim("3-wise winners", "x4 loses the election to x3", frozenset({"x3"}), _winners(3)),
            ),
        ),
        PaperInstance(
            "SMITH_IIA",
            load_profile("smith_iia"),
            (
                Claim("3-wise optimal score", "3-wise distance to V is 114", 114, _score(3)),
                Claim(
                    "3-wise median set",
                    "the only 3-wise median is x1 > A > x2 > B",
                    _labels("x1 > x3 > x4 > x5 > x2 > x6 > x7 > x8"),
                    _median_set(3),
                ),
                Claim(
                    "3/4-Smith set",
                    "S = {x1, x2, x3, x4, x5}",
                    frozenset({"x1", "x2", "x3", "x4", "x5"}),
                    _smith(Fraction(3, 4)),
                ),
                Claim("3/4-Smith rule size gate", "|I| = 5 > (3 + 4)/2", False, _smith_rule_fires),
                Claim(
                    "sub-election median set",
                    "unique 3-wise median x2 > x1 > x3 > x4 > x5",
                    _labels("x2 > x1 > x3 > x4 > x5"),
                    lambda p: _median_set(3)(_smith_subelection(p)),
                ),
                Claim(
                    "sub-election winner",
                    "a new unique 3-wise winner x2",
                    frozenset({"x2"}),
                    lambda p: _winners(3)(_smith_subelection(p)),
                ),
            ),
        ),
        PaperInstance(
            "MAJORITY_EXAMPLE",
            load_profile("majority_example"),
            tuple(
                Claim(
                    f"{k}-wise median set",
                    "pi is the unique k-wise median",
                    _labels("w > z1 > x > y"),
                    _median_set(k),
                )
                for k in (2, 3)
            )
            + (
                Claim(
                    "majority vote rule",
                    "vote in more than 50% is the unique median",
                    _labels("w > z1 > x > y"),
                    lambda p: frozenset(r.format(p.candidates) for r in rule_majority_vote_is_median(p, 3).medians),
                ),
            ),
        ),
    ]


def instance_ids() -> list[str]:
    return [inst.id for inst in instance_catalog()]


def get_instance(instance_id: str) -> PaperInstance:
    key = instance_id.upper().replace("-", "_")
    for inst in instance_catalog():
        if inst.id == key:
            return inst
    raise KeyError(f"unknown instance {instance_id!r}; known: {', '.join(instance_ids())}")
