"""Preference profiles as dense rank matrices.

A profile over m alternatives and n voters is stored as an n x m int64
matrix ``ranks`` where ``ranks[v, a]`` is the position of alternative
``a`` in voter ``v``'s order, counted from 0 (most preferred).  Every
row is a permutation of 0..m-1: ties and truncated ballots are not
representable on purpose.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np


class RuleKind(enum.Enum):
    """Committee rule selector: classic Chamberlin-Courant or Monroe."""

    CC = "cc"
    MONROE = "monroe"

    @classmethod
    def parse(cls, text: str) -> "RuleKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown rule {text!r}, expected 'cc' or 'monroe'") from None


class ProfileFormatError(ValueError):
    """Raised on malformed profile text; carries the 1-based line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class PreferenceProfile:
    """Immutable wrapper around the rank matrix."""

    ranks: np.ndarray

    def __post_init__(self):
        ranks = np.asarray(self.ranks, dtype=np.int64)
        if ranks.ndim != 2 or ranks.shape[0] < 1 or ranks.shape[1] < 1:
            raise ValueError("profile needs at least one voter and one alternative")
        expected = np.arange(ranks.shape[1], dtype=np.int64)
        if not np.array_equal(np.sort(ranks, axis=1), np.tile(expected, (ranks.shape[0], 1))):
            raise ValueError("every voter row must be a permutation of 0..m-1")
        ranks = ranks.copy()
        ranks.setflags(write=False)
        object.__setattr__(self, "ranks", ranks)

    @property
    def n_voters(self) -> int:
        return int(self.ranks.shape[0])

    @property
    def n_alternatives(self) -> int:
        return int(self.ranks.shape[1])

    def order_of(self, voter: int) -> np.ndarray:
        """Voter's alternatives from most to least preferred."""
        return np.argsort(self.ranks[voter], kind="stable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreferenceProfile):
            return NotImplemented
        return np.array_equal(self.ranks, other.ranks)

    def __hash__(self):
        return hash(self.ranks.tobytes())


def build_profile(orders: Sequence[Sequence[int]]) -> PreferenceProfile:
    """Build a profile from per-voter orders (most preferred first).

    Each order must be a permutation of ``0..m-1``; the alternative at
    position p gets rank p for that voter.
    """
    if len(orders) == 0:
        raise ValueError("profile needs at least one voter")
    m = len(orders[0])
    ranks = np.empty((len(orders), m), dtype=np.int64)
    positions = np.arange(m, dtype=np.int64)
    for v, order in enumerate(orders):
        row = np.asarray(order, dtype=np.int64)
        if row.shape != (m,):
            raise ValueError(f"voter {v}: order has length {row.shape}, expected {m}")
        ranks[v, row] = positions  # invalid ids surface as IndexError here
    return PreferenceProfile(ranks)


def rank_of(profile: PreferenceProfile, voter: int, alternative: int) -> int:
    """Rank (0 = top) that `voter` gives `alternative`."""
    n, m = profile.ranks.shape
    if not 0 <= voter < n:
        raise IndexError(f"voter {voter} out of range [0, {n})")
    if not 0 <= alternative < m:
        raise IndexError(f"alternative {alternative} out of range [0, {m})")
    return int(profile.ranks[voter, alternative])


def misrepresentation_sum(profile: PreferenceProfile, assignment: Sequence[int]) -> int:
    """Total misrepresentation of a full voter->alternative assignment.

    The assignment must name one alternative per voter; the score is the
    sum over voters of the rank each voter gives their assigned
    alternative.  Committee membership is not checked here.
    """
    a = _as_assignment_array(profile, assignment)
    return int(profile.ranks[np.arange(profile.n_voters), a].sum())


@dataclass
class ValidationReport:
    """Outcome of checking an assignment against a rule's usage quotas."""

    valid: bool
    k: int
    used_count: int
    usage: dict[int, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)


def validate_assignment(
    profile: PreferenceProfile,
    assignment: Sequence[int],
    k: int,
    rule: RuleKind,
) -> ValidationReport:
    """Check that an assignment is a valid k-committee assignment under `rule`.

    Valid means: exactly k distinct alternatives are used, and under
    Monroe every used alternative serves between floor(n/k) and
    ceil(n/k) voters.  Under CC the only requirement beyond image size
    is that each used alternative serves at least one voter, which
    holds by construction of the usage histogram.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    a = _as_assignment_array(profile, assignment)
    used, counts = np.unique(a, return_counts=True)
    usage = {int(c): int(cnt) for c, cnt in zip(used, counts)}
    violations: list[str] = []
    if len(used) != k:
        violations.append(f"assignment uses {len(used)} alternatives, expected exactly {k}")
    if rule is RuleKind.MONROE:
        n = profile.n_voters
        lo, hi = n // k, math.ceil(n / k)
        for c, cnt in usage.items():
            if not lo <= cnt <= hi:
                violations.append(
                    f"alternative {c} serves {cnt} voters, outside Monroe quota [{lo}, {hi}]"
                )
    return ValidationReport(
        valid=not violations,
        k=k,
        used_count=len(used),
        usage=usage,
        violations=violations,
    )


def _as_assignment_array(profile: PreferenceProfile, assignment: Sequence[int]) -> np.ndarray:
    a = np.asarray(assignment, dtype=np.int64)
    if a.shape != (profile.n_voters,):
        raise ValueError(
            f"assignment covers {a.shape} voters, expected ({profile.n_voters},)"
        )
    if a.size and (a.min() < 0 or a.max() >= profile.n_alternatives):
        raise ValueError("assignment names an alternative id out of range")
    return a


# ---------------------------------------------------------------------------
# Text format


def parse_profile(text: str) -> PreferenceProfile:
    """Parse the line-oriented profile format.

    The format is::

        # optional comments anywhere
        m 4
        n 2
        1 2 0 3
        0 3 2 1

    ``m``/``n`` headers must both appear (in either order) before the
    first voter row; then exactly n rows follow, each a permutation of
    0..m-1, most preferred first.  Blank lines and ``#`` comments are
    skipped.  Errors report 1-based line numbers.
    """
    m: int | None = None
    n: int | None = None
    rows: list[np.ndarray] = []
    row_count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] in ("m", "n"):
            if rows:
                raise ProfileFormatError(lineno, f"header {tokens[0]!r} after voter rows")
            if len(tokens) != 2:
                raise ProfileFormatError(lineno, f"expected '{tokens[0]} <int>'")
            try:
                value = int(tokens[1])
            except ValueError:
                raise ProfileFormatError(lineno, f"{tokens[0]} is not an integer: {tokens[1]!r}") from None
            if value < 1:
                raise ProfileFormatError(lineno, f"{tokens[0]} must be >= 1, got {value}")
            if tokens[0] == "m":
                if m is not None:
                    raise ProfileFormatError(lineno, "duplicate m header")
                m = value
            else:
                if n is not None:
                    raise ProfileFormatError(lineno, "duplicate n header")
                n = value
            continue
        # voter row
        if m is None or n is None:
            raise ProfileFormatError(lineno, "voter row before m/n headers")
        if row_count >= n:
            raise ProfileFormatError(lineno, f"more than n={n} voter rows")
        try:
            row = np.array([int(t) for t in tokens], dtype=np.int64)
        except ValueError:
            raise ProfileFormatError(lineno, "voter row contains a non-integer token") from None
        if row.size != m:
            raise ProfileFormatError(lineno, f"voter row has {row.size} entries, expected m={m}")
        if not np.array_equal(np.sort(row), np.arange(m, dtype=np.int64)):
            raise ProfileFormatError(lineno, "voter row is not a permutation of 0..m-1")
        rows.append(row)
        row_count += 1
    last = text.count("\n") + 1
    if m is None or n is None:
        raise ProfileFormatError(last, "missing m/n headers")
    if row_count != n:
        raise ProfileFormatError(last, f"found {row_count} voter rows, expected n={n}")
    return build_profile(rows)


def serialize_profile(profile: PreferenceProfile) -> str:
    """Render a profile in the format `parse_profile` reads.

    Output is deterministic: header, then one row per voter listing
    alternatives most preferred first, single spaces, trailing newline.
    """
    lines = [f"m {profile.n_alternatives}", f"n {profile.n_voters}"]
    for v in range(profile.n_voters):
        lines.append(" ".join(str(int(a)) for a in profile.order_of(v)))
    return "\n".join(lines) + "\n"
