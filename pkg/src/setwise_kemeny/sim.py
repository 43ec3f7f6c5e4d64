"""Seeded random profiles and applicability of the Always-type rules.

Votes are Fisher-Yates shuffles driven by SplitMix64; trial t of seed s
starts its stream at mix64(mix64(s) ^ t), so trials are independent of execution
order and can be computed in any chunking.

A rule is *applicable* to a profile when it forces at least one ordered pair:

* AT  : some pair is unanimous (before[x, y] = m)
* 2AT : extended Always, before[x, y] * n > (n - 1) * m
* 3AT : 3-wise unanimity, before[x, y] * (n^2-3n+4) > (n^2-3n+3) * m
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np

from . import kernels
from .model import Profile

RULES = ("AT", "2AT", "3AT")
Z99 = 2.576

# (n, m) -> published AT, 2AT, 3AT percentages over 10^5 trials
PAPER_GRID: dict[tuple[int, int], tuple[float, float, float]] = {
    (3, 3): (52.993, 52.993, 52.993),
    (3, 4): (29.916, 93.208, 29.916),
    (3, 7): (3.452, 80.354, 30.407),
    (3, 10): (0.419, 67.896, 27.414),
    (3, 13): (0.058, 57.042, 23.558),
    (3, 16): (0.005, 47.087, 5.88),
    (3, 19): (0.0, 39.294, 5.453),
    (3, 22): (0.0, 32.635, 4.765),
    (3, 25): (0.0, 26.871, 4.09),
    (3, 28): (0.0, 22.35, 1.079),
    (4, 5): (28.159, 89.767, 28.159),
    (4, 9): (1.713, 62.494, 18.92),
    (4, 13): (0.139, 38.778, 1.935),
    (4, 17): (0.007, 22.962, 1.244),
    (4, 21): (0.001, 13.341, 0.119),
    (4, 25): (0.0, 7.652, 0.104),
    (5, 6): (23.712, 84.405, 23.712),
    (5, 11): (0.973, 42.36, 0.973),
    (5, 16): (0.031, 17.053, 0.531),
    (5, 21): (0.0, 6.425, 0.03),
    (10, 11): (4.038, 33.935, 4.038),
    (10, 15): (0.282, 4.013, 0.282),
    (10, 21): (0.007, 0.95, 0.007),
    (15, 16): (0.327, 4.872, 0.327),
    (20, 21): (0.017, 0.394, 0.017),
}


@dataclass(frozen=True)
class SimConfig:
    n: int
    m: int
    trials: int
    seed: int
    rules: tuple[str, ...] = RULES

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        rules = tuple(r.upper() for r in self.rules)
        bad = [r for r in rules if r not in RULES]
        if bad or not rules:
            raise ValueError(f"unknown rule(s) {bad}; choose from {', '.join(RULES)}")
        object.__setattr__(self, "rules", rules)


@dataclass(frozen=True)
class RuleRate:
    rule: str
    hits: int
    trials: int

    @property
    def fraction(self) -> float:
        return self.hits / self.trials

    @property
    def percentage(self) -> float:
        return 100.0 * self.fraction

    @property
    def half_width(self) -> float:
        """99% normal-approximation half-width, in percentage points."""
        p = self.fraction
        return 100.0 * Z99 * math.sqrt(p * (1 - p) / self.trials)

    def sigma_for(self, p_percent: float) -> float:
        """Binomial standard deviation (percentage points) at a reference rate."""
        p = p_percent / 100.0
        return 100.0 * math.sqrt(p * (1 - p) / self.trials)


@dataclass(frozen=True)
class ApplicabilityReport:
    config: SimConfig
    rates: dict[str, RuleRate]
    bits: np.ndarray | None = field(default=None, compare=False, repr=False)

    def row(self) -> str:
        cells = [f"{self.config.n:>3}", f"{self.config.m:>3}"]
        for rule in self.config.rules:
            r = self.rates[rule]
            cells.append(f"{r.percentage:8.3f}% +- {r.half_width:.3f}")
        return "  ".join(cells)

    def percentages(self) -> dict[str, float]:
        return {k: v.percentage for k, v in self.rates.items()}


def random_profile(n: int, m: int, seed: int, trial: int = 0) -> Profile:
    """m uniform random votes over candidates c0..c{n-1} (trial ``trial`` of ``seed``)."""
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    orders = kernels.random_orders(n, m, seed, trial)
    return Profile.from_orders([f"c{i}" for i in range(n)], orders)


def applicability(config: SimConfig, keep_bits: bool = False) -> ApplicabilityReport:
    bits = kernels.applicability_bits(config.n, config.m, config.seed, 0, config.trials)
    rates = {
        rule: RuleRate(rule, int(bits[:, RULES.index(rule)].sum()), config.trials)
        for rule in config.rules
    }
    return ApplicabilityReport(config, rates, bits if keep_bits else None)


def paper_grid(trials: int, seed: int, points=None) -> list[ApplicabilityReport]:
    points = PAPER_GRID if points is None else points
    return [applicability(SimConfig(n, m, trials, seed)) for n, m in points]


# ---------------------------------------------------------------- exact oracle


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def exact_applicability(n: int, m: int) -> dict[str, Fraction]:
    """Exact probabilities under uniform votes, summing over vote-count vectors.

    Each multiset of votes has multinomial weight m! / prod(c_i!) out of
    (n!)^m, so the cost is C(m + n! - 1, n! - 1) tally evaluations.
    """
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    k = len(perms)
    pos = np.argsort(perms, axis=1)
    pair = (pos[:, :, None] < pos[:, None, :]).astype(np.int64)
    off = ~np.eye(n, dtype=bool)
    q2 = n * n - 3 * n + 4
    hits = {r: 0 for r in RULES}
    total = 0
    for counts in _compositions(m, k):
        weight = math.factorial(m)
        for c in counts:
            weight //= math.factorial(c)
        b = np.tensordot(np.asarray(counts), pair, axes=1)[off]
        total += weight
        if (b == m).any():
            hits["AT"] += weight
        if (b * n > (n - 1) * m).any():
            hits["2AT"] += weight
        if (b * q2 > (q2 - 1) * m).any():
            hits["3AT"] += weight
    assert total == math.factorial(n) ** m
    return {r: Fraction(h, total) for r, h in hits.items()}
