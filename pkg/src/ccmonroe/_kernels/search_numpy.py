"""Pure-numpy branch-and-bound committee search.

Iterative depth-first include/exclude search over the columns of a
rank matrix whose column order is the branching order.  Because
decisions are taken strictly left to right, the undecided set at depth
d is always the column suffix [d, mc), which makes the "best available
rank" per voter a precomputed suffix minimum joined with the running
minimum over included columns.

Per node the pruning bound is the max of two admissible lower bounds
on the cheapest completion, both derived from the identity
cost = sum_v base_v + sum_v (rank_v(assigned) - base_v):

* bound0 anchors base_v at f_v = min rank over available columns; the
  correction term per committee member c is at least the sum of the
  quota-lower-bound-many smallest entries of column c measured against
  f (each member serves at least max(lo, 1) voters, and the voter sets
  are disjoint across members).
* bound1 anchors base_v at the capped included-only minimum
  ghat_v = min(g_v, cap): picking an undecided column c can lower a
  voter's base by at most max(0, ghat_v - max(rank, f_v)), so the sum
  of the `needed` largest such per-column "rescues" bounds how far the
  base sum can fall; the same per-member service correction applies
  measured against g.

Leaves (k columns included) are evaluated exactly by the
transportation kernel; when the quota is slack (lo <= 1 and hi can
absorb all remaining voters) the equivalent and much smaller
formulation is used: base cost at the row minimum plus a min-cost
matching that charges each member its cheapest distinct representative
surcharge.

Tie-breaking is pinned; the numba twin replays the identical tree.
"""

from __future__ import annotations

import numpy as np

from ccmonroe._kernels.transport_numpy import transport

INF = np.int64(2) ** 62


def _smallest_sum(values: np.ndarray, t: int) -> np.int64:
    if t >= values.shape[0]:
        return values.sum()
    return np.partition(values, t - 1)[:t].sum()


def _largest_sum(values: np.ndarray, t: int) -> np.int64:
    u = values.shape[0]
    if t >= u:
        return values.sum()
    return np.partition(values, u - t)[u - t :].sum()


def _col_smallest_sums(mat: np.ndarray, t: int) -> np.ndarray:
    """Per row of `mat` (one committee column each), sum of the t smallest."""
    if t == 1:
        return mat.min(axis=1)
    if t >= mat.shape[1]:
        return mat.sum(axis=1)
    return np.partition(mat, t - 1, axis=1)[:, :t].sum(axis=1)


def _bound(RT, sufT, g, d, needed, lo_eff, incl, nincl, cap):
    f = np.minimum(g, sufT[d])
    F = f.sum()
    U = RT[d:]

    sf_und = _col_smallest_sums(U - f[None, :], lo_eff)
    sg_und = _col_smallest_sums(np.maximum(U - g[None, :], 0), lo_eff)
    if nincl:
        I = RT[incl[:nincl]]
        sf_inc = _col_smallest_sums(I - f[None, :], lo_eff).sum()
        sg_inc = _col_smallest_sums(np.maximum(I - g[None, :], 0), lo_eff).sum()
    else:
        sf_inc = sg_inc = np.int64(0)

    bound0 = F + sf_inc + _smallest_sum(sf_und, needed)

    ghat = np.minimum(g, cap)
    rescue = np.maximum(ghat[None, :] - np.maximum(U, f[None, :]), 0).sum(axis=1)
    bound1 = ghat.sum() - _largest_sum(rescue, needed) + sg_inc + _smallest_sum(sg_und, needed)

    return max(int(bound0), int(bound1))


def _leaf(RT, incl, k, lo, hi, g):
    n = RT.shape[1]
    if lo <= 1 and hi >= n - k + 1:
        # slack quota: row-minimum base plus distinct-representative matching
        base = int(g.sum())
        delta = np.ascontiguousarray(RT[incl[:k]] - g[None, :])
        total, _ = transport(delta, np.zeros(n, np.int64), np.ones(n, np.int64))
        return base + int(total)
    sub = np.ascontiguousarray(RT[incl[:k]].T)
    total, _ = transport(sub, np.full(k, lo, np.int64), np.full(k, hi, np.int64))
    return int(total)


def search(R, k, lo, hi, budget, first_hit, node_cap, rank_cap):
    n, mc = R.shape
    k = int(k)
    lo = int(lo)
    hi = int(hi)
    budget = int(budget)
    node_cap = int(node_cap)
    rank_cap = int(rank_cap)

    RT = np.ascontiguousarray(R.T)
    sufT = np.empty((mc + 1, n), dtype=np.int64)
    sufT[mc] = INF
    for d in range(mc - 1, -1, -1):
        np.minimum(RT[d], sufT[d + 1], out=sufT[d])

    lo_eff = max(lo, 1)
    blimit = budget if budget >= 0 else int(INF) - 1

    g = np.full(n, INF, dtype=np.int64)
    gstack = np.empty((mc, n), dtype=np.int64)
    incl = np.empty(max(k, 1), dtype=np.int64)
    nincl = 0

    found = False
    best_cost = int(INF)
    best_cols = np.full(k, -1, dtype=np.int64)
    nodes = 0
    aborted = False

    dstack = np.empty(mc + 2, dtype=np.int64)
    sstack = np.empty(mc + 2, dtype=np.int64)
    sp = 0
    dstack[0] = 0
    sstack[0] = 0

    while sp >= 0:
        d = int(dstack[sp])
        stage = int(sstack[sp])
        if stage == 0:
            nodes += 1
            if nodes > node_cap:
                aborted = True
                break
            limit = min(blimit, best_cost - 1)
            needed = k - nincl
            if needed == 0:
                cost = _leaf(RT, incl, k, lo, hi, g)
                if cost <= limit:
                    best_cost = cost
                    best_cols[:] = incl[:k]
                    found = True
                    if first_hit:
                        break
                sp -= 1
                continue
            if d == mc or needed > mc - d:
                sp -= 1
                continue
            cap = min(limit + 1, rank_cap)
            if _bound(RT, sufT, g, d, needed, lo_eff, incl, nincl, cap) > limit:
                sp -= 1
                continue
            sstack[sp] = 1
            gstack[d] = g
            incl[nincl] = d
            nincl += 1
            np.minimum(g, RT[d], out=g)
            sp += 1
            dstack[sp] = d + 1
            sstack[sp] = 0
            continue
        if stage == 1:
            g[:] = gstack[d]
            nincl -= 1
            sstack[sp] = 2
            sp += 1
            dstack[sp] = d + 1
            sstack[sp] = 0
            continue
        sp -= 1

    completed = not aborted
    return found, (best_cost if found else -1), best_cols, nodes, completed
