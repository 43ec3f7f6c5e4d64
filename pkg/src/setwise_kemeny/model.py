"""Elections, rankings and vote tallies, plus the profile text format.

A profile file looks like::

    # comment
    candidates: a b c
    2: a > b > c
    1: c > b > a

Each vote line is ``<multiplicity>: <label> > ... > <label>`` and must list
every declared candidate exactly once, most preferred first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels

MAX_CANDIDATES = 64

ThresholdRatio = Fraction


class ProfileError(ValueError):
    """Raised for malformed profile text or inconsistent votes."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def as_ratio(value) -> Fraction:
    """Parse ``"3/4"``, ``0.75`` or a Fraction into an exact ratio."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**9)
    return Fraction(value)


def reaches(count: int, m: int, ratio: Fraction) -> bool:
    """``count >= ratio * m`` in exact integer arithmetic ("at least")."""
    return count * ratio.denominator >= ratio.numerator * m


def exceeds(count: int, m: int, ratio: Fraction) -> bool:
    """``count > ratio * m`` in exact integer arithmetic ("more than")."""
    return count * ratio.denominator > ratio.numerator * m


@dataclass(frozen=True)
class CandidateSet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ProfileError("at least one candidate is required")
        if len(names) > MAX_CANDIDATES:
            raise ProfileError(
                f"{len(names)} candidates given, at most {MAX_CANDIDATES} are supported"
            )
        seen = set()
        for name in names:
            if not name or any(ch.isspace() for ch in name) or ">" in name or ":" in name:
                raise ProfileError(f"invalid candidate label {name!r}")
            if name in seen:
                raise ProfileError(f"duplicate candidate label {name!r}")
            seen.add(name)

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)


@dataclass(frozen=True)
class Ranking:
    """A strict total order; ``order[0]`` is the most preferred candidate index."""

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(c) for c in self.order)
        object.__setattr__(self, "order", order)
        if sorted(order) != list(range(len(order))):
            raise ValueError(f"not a permutation of 0..{len(order) - 1}: {order}")

    @property
    def n(self) -> int:
        return len(self.order)

    @cached_property
    def position(self) -> tuple[int, ...]:
        pos = [0] * len(self.order)
        for i, c in enumerate(self.order):
            pos[c] = i
        return tuple(pos)

    def prefers(self, x: int, y: int) -> bool:
        return self.position[x] < self.position[y]

    def top(self, subset: Iterable[int]) -> int:
        return min(subset, key=self.position.__getitem__)

    def reversed(self) -> "Ranking":
        return Ranking(self.order[::-1])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.order, dtype=np.int64)

    def labels(self, candidates: CandidateSet) -> list[str]:
        return [candidates.names[c] for c in self.order]

    def format(self, candidates: CandidateSet) -> str:
        return " > ".join(self.labels(candidates))

    @classmethod
    def from_labels(cls, labels: Sequence[str], candidates: CandidateSet) -> "Ranking":
        return cls(tuple(candidates.index[name] for name in labels))

    @classmethod
    def parse(cls, text: str, candidates: CandidateSet) -> "Ranking":
        """Parse ``"a > b > c"`` against ``candidates``."""
        labels = [tok.strip() for tok in text.split(">")]
        _check_labels(labels, candidates, None)
        return cls.from_labels(labels, candidates)


def _check_labels(labels: list[str], candidates: CandidateSet, lineno: int | None):
    seen = set()
    for name in labels:
        if not name:
            raise ProfileError("empty candidate label in ranking", lineno)
        if name not in candidates.index:
            raise ProfileError(f"unknown candidate {name!r}", lineno)
        if name in seen:
            raise ProfileError(f"duplicate candidate {name!r} in vote", lineno)
        seen.add(name)
    missing = [name for name in candidates.names if name not in seen]
    if missing:
        raise ProfileError(f"vote is missing candidate(s) {' '.join(missing)}", lineno)


@dataclass(frozen=True)
class PairTally:
    """``before[x, y]`` = number of votes (with multiplicity) ranking x before y."""

    before: np.ndarray
    m: int

    @property
    def n(self) -> int:
        return self.before.shape[0]

    def ratio(self, x: int, y: int) -> Fraction:
        return Fraction(int(self.before[x, y]), self.m)


@dataclass(frozen=True)
class TripleTopTally:
    """``top[w, a, b]`` = number of votes in which w precedes both a and b.

    Only entries with w, a, b pairwise distinct are meaningful.
    """

    top: np.ndarray
    m: int

    def count(self, subset: Iterable[int], w: int) -> int:
        others = [c for c in subset if c != w]
        if len(others) != 2:
            raise ValueError("subset must be a triple containing w")
        return int(self.top[w, others[0], others[1]])


@dataclass(frozen=True)
class Profile:
    candidates: CandidateSet
    votes: tuple[tuple[Ranking, int], ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        votes = tuple((r, int(k)) for r, k in self.votes)
        object.__setattr__(self, "votes", votes)
        if not votes:
            raise ProfileError("profile has no votes")
        for r, k in votes:
            if k < 1:
                raise ProfileError(f"multiplicity must be positive, got {k}")
            if r.n != self.candidates.n:
                raise ProfileError("vote does not rank every candidate")

    @property
    def n(self) -> int:
        return self.candidates.n

    @property
    def m(self) -> int:
        return sum(k for _, k in self.votes)

    @property
    def names(self) -> tuple[str, ...]:
        return self.candidates.names

    def orders(self) -> np.ndarray:
        """Vote orders as an ``(len(votes), n)`` int64 array."""
        if "orders" not in self._cache:
            arr = np.array([r.order for r, _ in self.votes], dtype=np.int64)
            arr.setflags(write=False)
            self._cache["orders"] = arr
        return self._cache["orders"]

    def weights(self) -> np.ndarray:
        if "weights" not in self._cache:
            arr = np.array([k for _, k in self.votes], dtype=np.int64)
            arr.setflags(write=False)
            self._cache["weights"] = arr
        return self._cache["weights"]

    def pair_tally(self) -> PairTally:
        if "pair" not in self._cache:
            self._cache["pair"] = build_pair_tally(self)
        return self._cache["pair"]

    def triple_tally(self) -> TripleTopTally:
        if "triple" not in self._cache:
            self._cache["triple"] = build_triple_tally(self)
        return self._cache["triple"]

    def merged(self) -> dict[Ranking, int]:
        """Multiplicity per distinct ranking."""
        out: dict[Ranking, int] = {}
        for r, k in self.votes:
            out[r] = out.get(r, 0) + k
        return out

    def ranking(self, text: str) -> Ranking:
        return Ranking.parse(text, self.candidates)

    def label(self, c: int) -> str:
        return self.candidates.names[c]

    def restrict(self, keep: Iterable[str]) -> "Profile":
        """Sub-election over the candidates in ``keep`` (declaration order kept)."""
        keep = set(keep)
        kept = [c for c in range(self.n) if self.names[c] in keep]
        remap = {c: i for i, c in enumerate(kept)}
        cands = CandidateSet(tuple(self.names[c] for c in kept))
        votes = [
            (Ranking(tuple(remap[c] for c in r.order if c in remap)), k)
            for r, k in self.votes
        ]
        return Profile(cands, tuple(votes))

    def relabel(self, perm: Sequence[int]) -> "Profile":
        """Candidate ``c`` becomes candidate ``perm[c]`` (labels move with it)."""
        names = [""] * self.n
        for c, p in enumerate(perm):
            names[p] = self.names[c]
        votes = [(Ranking(tuple(perm[c] for c in r.order)), k) for r, k in self.votes]
        return Profile(CandidateSet(tuple(names)), tuple(votes))

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return self.candidates == other.candidates and self.votes == other.votes

    def __hash__(self):
        return hash((self.candidates, self.votes))

    @classmethod
    def from_orders(cls, names: Sequence[str], orders, weights=None) -> "Profile":
        """Build from integer orders, e.g. an ``(m, n)`` array of permutations."""
        cands = CandidateSet(tuple(names))
        orders = [tuple(int(c) for c in row) for row in orders]
        if weights is None:
            weights = [1] * len(orders)
        return cls(cands, tuple((Ranking(o), int(k)) for o, k in zip(orders, weights)))

    @classmethod
    def from_votes(cls, names: Sequence[str], votes: Iterable[tuple[int, str]]) -> "Profile":
        """Build from ``(multiplicity, "a > b > c")`` pairs."""
        cands = CandidateSet(tuple(names))
        return cls(cands, tuple((Ranking.parse(text, cands), k) for k, text in votes))


def parse_profile(text: str) -> Profile:
    """Parse profile-file text into a validated :class:`Profile`."""
    candidates: CandidateSet | None = None
    votes: list[tuple[Ranking, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            raise ProfileError(f"expected '<key>: ...', got {line!r}", lineno)
        head = head.strip()
        if candidates is None:
            if head != "candidates":
                raise ProfileError("first line must declare 'candidates:'", lineno)
            try:
                candidates = CandidateSet(tuple(rest.split()))
            except ProfileError as exc:
                raise ProfileError(str(exc), lineno) from None
            continue
        try:
            mult = int(head)
        except ValueError:
            raise ProfileError(f"bad multiplicity {head!r}", lineno) from None
        if mult < 1:
            raise ProfileError(f"multiplicity must be positive, got {mult}", lineno)
        labels = [tok.strip() for tok in rest.split(">")]
        _check_labels(labels, candidates, lineno)
        votes.append((Ranking.from_labels(labels, candidates), mult))
    if candidates is None:
        raise ProfileError("no 'candidates:' declaration found")
    if not votes:
        raise ProfileError("profile has no votes")
    return Profile(candidates, tuple(votes))


def format_profile(profile: Profile, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.append("candidates: " + " ".join(profile.names))
    for r, k in profile.votes:
        lines.append(f"{k}: {r.format(profile.candidates)}")
    return "\n".join(lines) + "\n"


def build_pair_tally(profile: Profile) -> PairTally:
    before = kernels.pair_tally(profile.orders(), profile.weights(), profile.n)
    before.setflags(write=False)
    return PairTally(before, profile.m)


def build_triple_tally(profile: Profile) -> TripleTopTally:
    top = kernels.triple_tally(profile.orders(), profile.weights(), profile.n)
    top.setflags(write=False)
    return TripleTopTally(top, profile.m)


@dataclass(frozen=True)
class MedianResult:
    """Optimal k-wise score with one (``complete=False``) or all optimal rankings."""

    scheme: int
    optimal_score: int
    medians: tuple[Ranking, ...]
    complete: bool
    solver: str
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def median(self) -> Ranking:
        return self.medians[0]

    @property
    def unique(self) -> bool:
        return self.complete and len(self.medians) == 1
