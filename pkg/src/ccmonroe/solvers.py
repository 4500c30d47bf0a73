"""Exact committee-level solvers and budget decision procedures.

`brute_force_solve` enumerates every size-k committee (the oracle);
`solve_exact` and `decide_budget` run a depth-first branch-and-bound
over include/exclude decisions per candidate alternative, evaluating
complete committees with the transportation engine and pruning with
admissible lower bounds on the cheapest completion (see
ccmonroe._kernels.search_numpy for the bound derivation).  All solve
paths are deterministic: no randomness, fixed tie-breaking, and node
caps instead of wall clocks.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass

import numpy as np

from ccmonroe import _kernels
from ccmonroe.engine import (
    AssignmentResult,
    optimal_assignment_for_committee,
    quota_interval,
)
from ccmonroe.profiles import PreferenceProfile, RuleKind

DEFAULT_NODE_CAP = 10_000_000

_COMMITTEE_GUARD = 10**6


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SolveOutcome:
    """Solver verdict plus witness and work counter.

    status INFEASIBLE and INCONCLUSIVE carry no committee/result; an
    INCONCLUSIVE outcome means the node cap fired before the search
    could either find a witness or exhaust the space.
    """

    status: SolveStatus
    committee: tuple[int, ...] | None
    result: AssignmentResult | None
    nodes_explored: int

    @property
    def cost(self) -> int | None:
        return None if self.result is None else self.result.cost


def candidate_filter(profile: PreferenceProfile, k: int, beta: int) -> set[int]:
    """Alternatives that could appear in any committee of cost <= beta.

    Exact-usage forces every member to serve at least one voter at its
    own rank, so an alternative nobody ranks <= beta prices any
    committee containing it above the budget.  `k` is part of the
    interface for symmetry with the solvers but does not affect the set.
    """
    del k
    return {int(c) for c in np.flatnonzero(profile.ranks.min(axis=0) <= beta)}


def _service_lower_bounds(ranks: np.ndarray, lo_eff: int) -> np.ndarray:
    """Per-column sum of the lo_eff smallest ranks (cheapest possible service)."""
    if lo_eff == 1:
        return ranks.min(axis=0)
    if lo_eff >= ranks.shape[0]:
        return ranks.sum(axis=0)
    return np.partition(ranks, lo_eff - 1, axis=0)[:lo_eff].sum(axis=0)


def _branch_order(ranks: np.ndarray, cand: np.ndarray) -> np.ndarray:
    """Candidates by descending coverage (voters whose best available rank
    would worsen if the candidate were excluded), ties by ascending id."""
    sub = ranks[:, cand]
    best = sub.min(axis=1)
    cover = (sub == best[:, None]).sum(axis=0)
    return cand[np.lexsort((cand, -cover))]


def _run_search(
    profile: PreferenceProfile,
    k: int,
    rule: RuleKind,
    budget: int | None,
    first_hit: bool,
    node_cap: int,
) -> SolveOutcome:
    n, m = profile.n_voters, profile.n_alternatives
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > m:
        raise ValueError(f"k = {k} exceeds the number of alternatives {m}")
    if n < k:
        return SolveOutcome(SolveStatus.INFEASIBLE, None, None, 0)
    if budget is not None and budget < 0:
        # costs are sums of ranks, never negative
        return SolveOutcome(SolveStatus.INFEASIBLE, None, None, 0)

    q = quota_interval(rule, n, k)
    ranks = profile.ranks
    if budget is None:
        cand = np.arange(m, dtype=np.int64)
    else:
        lo_eff = max(q.lower, 1)
        svc = _service_lower_bounds(ranks, lo_eff)
        cand = np.flatnonzero(svc <= budget).astype(np.int64)
        if cand.size < k:
            return SolveOutcome(SolveStatus.INFEASIBLE, None, None, 0)
        if int(ranks[:, cand].min(axis=1).sum()) > budget:
            return SolveOutcome(SolveStatus.INFEASIBLE, None, None, 0)

    ordered = _branch_order(ranks, cand)
    sub = np.ascontiguousarray(ranks[:, ordered])
    found, best, cols, nodes, completed = _kernels.search(
        sub,
        k,
        q.lower,
        q.upper,
        -1 if budget is None else budget,
        first_hit,
        node_cap,
        m,
    )
    if first_hit and found:
        pass  # an early hit is conclusive even though the tree wasn't exhausted
    elif not completed:
        return SolveOutcome(SolveStatus.INCONCLUSIVE, None, None, nodes)
    if not found:
        return SolveOutcome(SolveStatus.INFEASIBLE, None, None, nodes)

    committee = tuple(sorted(int(ordered[c]) for c in cols))
    result = optimal_assignment_for_committee(profile, committee, rule)
    if result.cost != best:  # kernel leaf vs engine transport cross-check
        raise AssertionError(
            f"search kernel cost {best} disagrees with engine re-solve {result.cost}"
        )
    status = SolveStatus.FEASIBLE if budget is not None else SolveStatus.OPTIMAL
    return SolveOutcome(status, committee, result, nodes)


def solve_exact(
    profile: PreferenceProfile,
    k: int,
    rule: RuleKind,
    budget: int | None = None,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
) -> SolveOutcome:
    """Minimize total misrepresentation over all size-k committees.

    Without a budget the status is OPTIMAL and the result is the global
    minimum.  With a budget the search prunes everything above it and
    returns FEASIBLE with the cheapest committee within budget (which
    is the global optimum whenever that optimum fits the budget), or
    INFEASIBLE when no committee fits.
    """
    return _run_search(profile, k, rule, budget, first_hit=False, node_cap=node_cap)


def decide_budget(
    profile: PreferenceProfile,
    k: int,
    rule: RuleKind,
    beta: int,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
) -> SolveOutcome:
    """Is there a size-k committee with an assignment of cost <= beta?

    Stops at the first witness (its cost is <= beta but not necessarily
    minimal).  beta < 0 answers INFEASIBLE directly since costs are
    nonnegative.
    """
    return _run_search(profile, k, rule, beta, first_hit=True, node_cap=node_cap)


def brute_force_solve(profile: PreferenceProfile, k: int, rule: RuleKind) -> SolveOutcome:
    """Oracle: evaluate every size-k committee and return the best.

    Guard: C(m, k) <= 10^6 committees.  Ties resolve to the
    lexicographically smallest committee.  nodes_explored counts
    evaluated committees.
    """
    n, m = profile.n_voters, profile.n_alternatives
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > m:
        raise ValueError(f"k = {k} exceeds the number of alternatives {m}")
    if math.comb(m, k) > _COMMITTEE_GUARD:
        raise ValueError(
            f"C({m},{k}) = {math.comb(m, k)} exceeds the enumeration guard {_COMMITTEE_GUARD}"
        )
    if n < k:
        return SolveOutcome(SolveStatus.INFEASIBLE, None, None, 0)
    import itertools

    best: AssignmentResult | None = None
    count = 0
    for combo in itertools.combinations(range(m), k):
        count += 1
        res = optimal_assignment_for_committee(profile, combo, rule)
        if best is None or res.cost < best.cost:
            best = res
    assert best is not None
    return SolveOutcome(SolveStatus.OPTIMAL, best.committee, best, count)


def outcome_to_json(outcome: SolveOutcome) -> str:
    """Serialize as {"status", "cost"?, "committee"?, "assignment"?, "nodes"}."""
    obj: dict = {
        "status": outcome.status.value,
        "nodes": outcome.nodes_explored,
    }
    if outcome.result is not None:
        obj["cost"] = outcome.result.cost
        obj["committee"] = [int(c) for c in outcome.result.committee]
        obj["assignment"] = {
            str(v): int(a) for v, a in enumerate(outcome.result.assignment)
        }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
