"""Fixed-committee assignment optimization.

Given a profile and a committee S of k alternatives, find the cheapest
voter assignment that uses every member within its usage quota:
[1, n] for CC (every member represents someone), [floor(n/k),
ceil(n/k)] for Monroe.  The workhorse is a min-cost transportation
solve; `brute_force_assignment` enumerates all k^n maps as an
independent oracle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ccmonroe import _kernels
from ccmonroe.profiles import (
    PreferenceProfile,
    RuleKind,
    misrepresentation_sum,
    validate_assignment,
)


class InfeasibleCommitteeError(ValueError):
    """No assignment can satisfy the committee's usage quotas."""


@dataclass(frozen=True)
class QuotaInterval:
    """Per-member usage bounds; lower=1 for CC, n/k rounding for Monroe."""

    lower: int
    upper: int

    def __post_init__(self):
        if self.lower < 0 or self.upper < self.lower:
            raise ValueError(f"invalid quota interval [{self.lower}, {self.upper}]")


def quota_interval(rule: RuleKind, n: int, k: int) -> QuotaInterval:
    """Usage interval per committee member for `rule` with n voters, k seats."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if rule is RuleKind.CC:
        return QuotaInterval(1, n)
    return QuotaInterval(n // k, math.ceil(n / k))


@dataclass(frozen=True)
class AssignmentResult:
    """An assignment (voter -> alternative id) with its total cost."""

    assignment: np.ndarray
    cost: int
    committee: tuple[int, ...]
    rule: RuleKind

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64).copy()
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)


def _checked_committee(profile: PreferenceProfile, committee: Sequence[int]) -> np.ndarray:
    cols = np.asarray(sorted(int(c) for c in committee), dtype=np.int64)
    if cols.size == 0:
        raise ValueError("committee must be nonempty")
    if np.unique(cols).size != cols.size:
        raise ValueError("committee contains duplicate alternatives")
    if cols[0] < 0 or cols[-1] >= profile.n_alternatives:
        raise ValueError("committee names an alternative id out of range")
    return cols


def optimal_assignment_for_committee(
    profile: PreferenceProfile,
    committee: Sequence[int],
    rule: RuleKind,
) -> AssignmentResult:
    """Cheapest assignment using every member of `committee` within quota.

    Solved as a transportation problem: each voter ships one unit, each
    member demands between quota.lower and quota.upper units, and the
    arc cost is the voter's rank of the member.  Raises
    InfeasibleCommitteeError when n < k (k distinct members cannot all
    be used).
    """
    cols = _checked_committee(profile, committee)
    n = profile.n_voters
    k = int(cols.size)
    if n < k:
        raise InfeasibleCommitteeError(
            f"{k} committee members cannot all represent someone among {n} voters"
        )
    q = quota_interval(rule, n, k)
    sub = np.ascontiguousarray(profile.ranks[:, cols])
    total, local = _kernels.transport(
        sub, np.full(k, q.lower, np.int64), np.full(k, q.upper, np.int64)
    )
    assignment = cols[local]
    report = validate_assignment(profile, assignment, k, rule)
    if not report.valid:  # kernel contract violation, not a user error
        raise AssertionError(f"transport produced an invalid assignment: {report.violations}")
    assert total == misrepresentation_sum(profile, assignment)
    return AssignmentResult(assignment=assignment, cost=int(total), committee=tuple(int(c) for c in cols), rule=rule)


def free_cc_cost(profile: PreferenceProfile, committee: Sequence[int]) -> int:
    """Sum over voters of the best rank available in `committee`.

    This drops the every-member-used requirement, so it lower-bounds
    the exact-usage CC cost (and hence the Monroe cost) for the same
    committee and is monotone nonincreasing as the committee grows.
    """
    cols = _checked_committee(profile, committee)
    return int(profile.ranks[:, cols].min(axis=1).sum())


_BRUTE_GUARD = 10**7
_CHUNK = 1 << 15


def brute_force_assignment(
    profile: PreferenceProfile,
    committee: Sequence[int],
    rule: RuleKind,
) -> AssignmentResult:
    """Oracle twin of `optimal_assignment_for_committee` by enumeration.

    Walks all k^n total maps from voters to committee members (guard:
    k^n <= 10^7), keeps those whose usage histogram fits the quota, and
    returns the cheapest; ties broken by the lexicographically smallest
    assignment vector.
    """
    cols = _checked_committee(profile, committee)
    n = profile.n_voters
    k = int(cols.size)
    if k**n > _BRUTE_GUARD:
        raise ValueError(f"k^n = {k}^{n} exceeds the enumeration guard {_BRUTE_GUARD}")
    if n < k:
        raise InfeasibleCommitteeError(
            f"{k} committee members cannot all represent someone among {n} voters"
        )
    q = quota_interval(rule, n, k)
    sub = profile.ranks[:, cols]
    total = k**n
    weights = (k ** np.arange(n - 1, -1, -1, dtype=np.int64))  # voter 0 most significant
    best_cost = None
    best_vec = None
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (idx[:, None] // weights[None, :]) % k
        costs = sub[np.arange(n)[None, :], digits].sum(axis=1)
        valid = np.ones(idx.size, dtype=bool)
        for c in range(k):
            cnt = (digits == c).sum(axis=1)
            valid &= (cnt >= q.lower) & (cnt <= q.upper)
        if not valid.any():
            continue
        costs = np.where(valid, costs, np.iinfo(np.int64).max)
        pos = int(np.argmin(costs))
        if best_cost is None or costs[pos] < best_cost:
            best_cost = int(costs[pos])
            best_vec = digits[pos].copy()
    if best_cost is None:
        raise InfeasibleCommitteeError("no assignment satisfies the usage quotas")
    assignment = cols[best_vec]
    return AssignmentResult(assignment=assignment, cost=best_cost, committee=tuple(int(c) for c in cols), rule=rule)


# ---------------------------------------------------------------------------
# Assignment JSON


def assignment_to_json(result: AssignmentResult) -> str:
    """Serialize as {"k", "cost", "committee", "assignment"} JSON."""
    obj = {
        "k": len(result.committee),
        "cost": result.cost,
        "committee": [int(c) for c in result.committee],
        "assignment": {str(v): int(a) for v, a in enumerate(result.assignment)},
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def assignment_from_json(text: str, rule: RuleKind = RuleKind.CC) -> AssignmentResult:
    """Parse the assignment JSON shape; inverse of `assignment_to_json`."""
    obj = json.loads(text)
    for key in ("k", "cost", "committee", "assignment"):
        if key not in obj:
            raise ValueError(f"assignment JSON missing key {key!r}")
    try:
        committee = tuple(sorted(int(c) for c in obj["committee"]))
        if len(committee) != int(obj["k"]):
            raise ValueError("committee length disagrees with k")
        amap = obj["assignment"]
        n = len(amap)
        assignment = np.empty(n, dtype=np.int64)
        for v in range(n):
            key = str(v)
            if key not in amap:
                raise ValueError(f"assignment JSON missing voter {v}")
            assignment[v] = int(amap[key])
        cost = int(obj["cost"])
    except TypeError as exc:
        raise ValueError(f"assignment JSON has a wrong value type: {exc}") from None
    return AssignmentResult(
        assignment=assignment, cost=cost, committee=committee, rule=rule
    )
