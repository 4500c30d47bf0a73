"""Committee-level search: brute-force oracle vs branch-and-bound.

The bound actually used inside the search kernels is stronger than the
plain free-choice lower bound, but both are admissible; soundness shows
up here as exact cost agreement with brute force (an over-eager bound
would lose optima), and the free-bound admissibility invariant is
asserted directly on committee supersets.
"""

import itertools
import json
import math

import numpy as np
import pytest

from ccmonroe import (
    RuleKind,
    SolveStatus,
    brute_force_solve,
    build_profile,
    candidate_filter,
    decide_budget,
    free_cc_cost,
    optimal_assignment_for_committee,
    outcome_to_json,
    solve_exact,
)


def _random_profile(rng, m_max=9, n_max=7):
    m = int(rng.integers(2, m_max + 1))
    n = int(rng.integers(1, n_max + 1))
    return build_profile([rng.permutation(m) for _ in range(n)])


def test_brute_force_single_committee():
    p = build_profile([[1, 0, 2]] * 3)
    out = brute_force_solve(p, 3, RuleKind.CC)
    assert out.status is SolveStatus.OPTIMAL
    assert out.committee == (0, 1, 2)


def test_brute_force_k1_is_borda_minimizer():
    rng = np.random.default_rng(2)
    p = _random_profile(rng)
    out = brute_force_solve(p, 1, RuleKind.CC)
    sums = p.ranks.sum(axis=0)
    assert out.result.cost == int(sums.min())
    assert out.committee == (int(sums.argmin()),)


def test_brute_force_guard():
    p = build_profile([np.random.default_rng(0).permutation(40) for _ in range(2)])
    with pytest.raises(ValueError):
        brute_force_solve(p, 20, RuleKind.CC)


def test_k_validation():
    p = build_profile([[0, 1]])
    with pytest.raises(ValueError):
        solve_exact(p, 0, RuleKind.CC)
    with pytest.raises(ValueError):
        solve_exact(p, 3, RuleKind.CC)


def test_cc_more_members_than_voters_is_infeasible():
    p = build_profile([[0, 1, 2]])
    out = solve_exact(p, 2, RuleKind.CC)
    assert out.status is SolveStatus.INFEASIBLE


def test_oracle_agreement_small_suite():
    rng = np.random.default_rng(101)
    for trial in range(60):
        p = _random_profile(rng)
        k = int(rng.integers(1, min(3, p.n_alternatives) + 1))
        if p.n_voters < k:
            continue
        rule = RuleKind.CC if trial % 2 == 0 else RuleKind.MONROE
        a = solve_exact(p, k, rule)
        b = brute_force_solve(p, k, rule)
        assert a.status is b.status is SolveStatus.OPTIMAL
        assert a.result.cost == b.result.cost


def test_budget_boundary():
    rng = np.random.default_rng(103)
    for trial in range(30):
        p = _random_profile(rng)
        k = int(rng.integers(1, min(3, p.n_alternatives) + 1))
        if p.n_voters < k:
            continue
        rule = RuleKind.MONROE if trial % 2 else RuleKind.CC
        opt = solve_exact(p, k, rule).result.cost
        at = decide_budget(p, k, rule, opt)
        assert at.status is SolveStatus.FEASIBLE
        assert at.result.cost <= opt
        below = decide_budget(p, k, rule, opt - 1)
        assert below.status is SolveStatus.INFEASIBLE


def test_negative_budget_is_infeasible_without_search():
    p = build_profile([[0, 1], [1, 0]])
    out = decide_budget(p, 1, RuleKind.CC, -1)
    assert out.status is SolveStatus.INFEASIBLE
    assert out.nodes_explored == 0


def test_huge_budget_always_feasible():
    rng = np.random.default_rng(107)
    p = _random_profile(rng)
    k = min(2, p.n_alternatives)
    if p.n_voters >= k:
        ceiling = p.n_voters * (p.n_alternatives - 1)
        out = decide_budget(p, k, RuleKind.CC, ceiling)
        assert out.status is SolveStatus.FEASIBLE


def test_zero_budget_characterization():
    # at beta = 0 every voter must receive their own top, so the only
    # candidate committee is the set of distinct tops; exact usage then
    # demands that this set has size exactly k
    rng = np.random.default_rng(109)
    for _ in range(40):
        p = _random_profile(rng, m_max=6, n_max=6)
        k = int(rng.integers(1, min(3, p.n_alternatives) + 1))
        if p.n_voters < k:
            continue
        out = decide_budget(p, k, RuleKind.CC, 0)
        tops = {int(p.order_of(v)[0]) for v in range(p.n_voters)}
        expected = len(tops) == k
        assert (out.status is SolveStatus.FEASIBLE) == expected
        if out.status is SolveStatus.FEASIBLE:
            assert out.result.cost == 0


def test_budgeted_solve_exact_returns_optimum():
    rng = np.random.default_rng(113)
    for _ in range(20):
        p = _random_profile(rng)
        k = min(2, p.n_alternatives)
        if p.n_voters < k:
            continue
        opt = solve_exact(p, k, RuleKind.CC).result.cost
        budgeted = solve_exact(p, k, RuleKind.CC, budget=opt)
        assert budgeted.status is SolveStatus.FEASIBLE
        assert budgeted.result.cost == opt


def test_candidate_filter_examples():
    p = build_profile([[2, 0, 1], [1, 2, 0]])
    assert candidate_filter(p, 1, p.n_alternatives - 1) == {0, 1, 2}
    assert candidate_filter(p, 1, 0) == {1, 2}  # the two top alternatives


def test_candidate_filter_keeps_all_cheap_committees():
    rng = np.random.default_rng(127)
    for _ in range(25):
        p = _random_profile(rng, m_max=7, n_max=6)
        k = int(rng.integers(1, min(3, p.n_alternatives) + 1))
        if p.n_voters < k:
            continue
        beta = int(rng.integers(0, p.n_voters + 3))
        kept = candidate_filter(p, k, beta)
        for members in itertools.combinations(range(p.n_alternatives), k):
            try:
                cost = optimal_assignment_for_committee(p, members, RuleKind.CC).cost
            except ValueError:
                continue
            if cost <= beta:
                assert set(members) <= kept


def test_free_bound_admissibility_along_supersets():
    # the advertised node bound: free cost over included+undecided never
    # exceeds the exact cost of any completion committee inside that set
    rng = np.random.default_rng(131)
    for _ in range(30):
        p = _random_profile(rng)
        m = p.n_alternatives
        k = int(rng.integers(1, min(3, m) + 1))
        if p.n_voters < k:
            continue
        members = tuple(int(c) for c in rng.choice(m, size=k, replace=False))
        envelope = sorted(set(members) | set(map(int, rng.choice(m, size=min(m, k + 2)))))
        bound = free_cc_cost(p, envelope)
        assert bound <= optimal_assignment_for_committee(p, members, RuleKind.CC).cost
        assert bound <= optimal_assignment_for_committee(p, members, RuleKind.MONROE).cost


def test_node_cap_yields_inconclusive():
    rng = np.random.default_rng(137)
    p = build_profile([rng.permutation(10) for _ in range(7)])
    out = solve_exact(p, 3, RuleKind.CC, node_cap=1)
    assert out.status is SolveStatus.INCONCLUSIVE
    assert out.committee is None and out.result is None


def test_solve_exact_is_deterministic():
    rng = np.random.default_rng(139)
    p = _random_profile(rng)
    k = min(2, p.n_alternatives)
    runs = [solve_exact(p, k, RuleKind.MONROE) for _ in range(3)]
    assert len({r.result.cost for r in runs}) == 1
    assert len({r.committee for r in runs}) == 1
    assert len({r.nodes_explored for r in runs}) == 1


def test_outcome_json_statuses():
    p = build_profile([[0, 1], [1, 0]])
    optimal = json.loads(outcome_to_json(solve_exact(p, 1, RuleKind.CC)))
    assert optimal["status"] == "optimal"
    assert set(optimal) == {"status", "nodes", "cost", "committee", "assignment"}
    shared = build_profile([[0, 1], [0, 1]])
    infeasible = json.loads(outcome_to_json(decide_budget(shared, 2, RuleKind.CC, 0)))
    assert infeasible["status"] == "infeasible"
    assert "cost" not in infeasible
    capped = json.loads(
        outcome_to_json(solve_exact(p, 1, RuleKind.CC, node_cap=0))
    )
    assert capped["status"] == "inconclusive"
