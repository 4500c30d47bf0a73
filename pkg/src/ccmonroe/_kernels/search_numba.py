"""Numba-jitted branch-and-bound committee search.

Loop-for-loop transliteration of `search_numpy` (see its docstring for
the algorithm and the admissibility argument).  Partial selections use
small insertion buffers instead of np.partition; the selected sums are
identical either way, so both backends prune the same nodes and report
the same node counts.  The rank matrix is held transposed (one
contiguous row per committee column) because the bound is dominated by
per-column scans.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ccmonroe._kernels.transport_numba import transport_jit

INF = np.int64(2) ** 62


@njit(cache=True)
def _insert_smallest(buf, cnt, size, x):  # pragma: no cover - jitted
    """Keep the `size` smallest values seen, ascending; returns new count."""
    if cnt < size:
        pos = cnt
        while pos > 0 and buf[pos - 1] > x:
            buf[pos] = buf[pos - 1]
            pos -= 1
        buf[pos] = x
        return cnt + 1
    if x < buf[size - 1]:
        pos = size - 1
        while pos > 0 and buf[pos - 1] > x:
            buf[pos] = buf[pos - 1]
            pos -= 1
        buf[pos] = x
    return cnt


@njit(cache=True)
def _insert_largest(buf, cnt, size, x):  # pragma: no cover - jitted
    """Keep the `size` largest values seen, descending; returns new count."""
    if cnt < size:
        pos = cnt
        while pos > 0 and buf[pos - 1] < x:
            buf[pos] = buf[pos - 1]
            pos -= 1
        buf[pos] = x
        return cnt + 1
    if x > buf[size - 1]:
        pos = size - 1
        while pos > 0 and buf[pos - 1] < x:
            buf[pos] = buf[pos - 1]
            pos -= 1
        buf[pos] = x
    return cnt


@njit(cache=True)
def _bound(RT, sufT, g, d, needed, lo_eff, incl, nincl, cap, f, ghat, svc_buf, svc_buf2, sel_small, sel_large, sel_small2):  # pragma: no cover - jitted
    mc, n = RT.shape

    F = np.int64(0)
    sum_ghat = np.int64(0)
    for v in range(n):
        fv = sufT[d, v]
        if g[v] < fv:
            fv = g[v]
        f[v] = fv
        F += fv
        gh = g[v]
        if gh > cap:
            gh = cap
        ghat[v] = gh
        sum_ghat += gh

    # undecided columns: per-column service terms and rescue values,
    # one fused pass per column so the accumulators stay in registers
    cnt_sf = 0
    cnt_sg = 0
    cnt_rs = 0
    sf_inc = np.int64(0)
    sg_inc = np.int64(0)
    if lo_eff == 1:
        for c in range(d, mc):
            row = RT[c]
            sfc = INF
            sgc = INF
            rs = np.int64(0)
            for v in range(n):
                x = row[v]
                a = x - f[v]
                if a < sfc:
                    sfc = a
                b = x - g[v]
                if b < 0:
                    b = np.int64(0)
                if b < sgc:
                    sgc = b
                y = x if x > f[v] else f[v]
                rv = ghat[v] - y
                if rv > 0:
                    rs += rv
            cnt_sf = _insert_smallest(sel_small, cnt_sf, needed, sfc)
            cnt_sg = _insert_smallest(sel_small2, cnt_sg, needed, sgc)
            cnt_rs = _insert_largest(sel_large, cnt_rs, needed, rs)
        for t in range(nincl):
            row = RT[incl[t]]
            sfc = INF
            sgc = INF
            for v in range(n):
                x = row[v]
                a = x - f[v]
                if a < sfc:
                    sfc = a
                b = x - g[v]
                if b < 0:
                    b = np.int64(0)
                if b < sgc:
                    sgc = b
            sf_inc += sfc
            sg_inc += sgc
    else:
        for c in range(d, mc):
            row = RT[c]
            csf = 0
            csg = 0
            rs = np.int64(0)
            for v in range(n):
                x = row[v]
                csf = _insert_smallest(svc_buf, csf, lo_eff, x - f[v])
                b = x - g[v]
                if b < 0:
                    b = np.int64(0)
                csg = _insert_smallest(svc_buf2, csg, lo_eff, b)
                y = x if x > f[v] else f[v]
                rv = ghat[v] - y
                if rv > 0:
                    rs += rv
            sfc = np.int64(0)
            for t in range(csf):
                sfc += svc_buf[t]
            sgc = np.int64(0)
            for t in range(csg):
                sgc += svc_buf2[t]
            cnt_sf = _insert_smallest(sel_small, cnt_sf, needed, sfc)
            cnt_sg = _insert_smallest(sel_small2, cnt_sg, needed, sgc)
            cnt_rs = _insert_largest(sel_large, cnt_rs, needed, rs)
        for t in range(nincl):
            row = RT[incl[t]]
            csf = 0
            csg = 0
            for v in range(n):
                x = row[v]
                csf = _insert_smallest(svc_buf, csf, lo_eff, x - f[v])
                b = x - g[v]
                if b < 0:
                    b = np.int64(0)
                csg = _insert_smallest(svc_buf2, csg, lo_eff, b)
            for q in range(csf):
                sf_inc += svc_buf[q]
            for q in range(csg):
                sg_inc += svc_buf2[q]

    sf_sel = np.int64(0)
    for t in range(cnt_sf):
        sf_sel += sel_small[t]
    sg_sel = np.int64(0)
    for t in range(cnt_sg):
        sg_sel += sel_small2[t]
    rs_sel = np.int64(0)
    for t in range(cnt_rs):
        rs_sel += sel_large[t]

    bound0 = F + sf_inc + sf_sel
    bound1 = sum_ghat - rs_sel + sg_inc + sg_sel
    if bound0 > bound1:
        return bound0
    return bound1


@njit(cache=True)
def _leaf(RT, incl, k, lo, hi, g):  # pragma: no cover - jitted
    n = RT.shape[1]
    if lo <= 1 and hi >= n - k + 1:
        base = np.int64(0)
        for v in range(n):
            base += g[v]
        delta = np.empty((k, n), dtype=np.int64)
        for c in range(k):
            row = RT[incl[c]]
            for v in range(n):
                delta[c, v] = row[v] - g[v]
        total, _ = transport_jit(delta, np.zeros(n, np.int64), np.ones(n, np.int64))
        return base + total
    sub = np.empty((n, k), dtype=np.int64)
    for c in range(k):
        row = RT[incl[c]]
        for v in range(n):
            sub[v, c] = row[v]
    total, _ = transport_jit(sub, np.full(k, lo, np.int64), np.full(k, hi, np.int64))
    return total


@njit(cache=True)
def search_jit(R, k, lo, hi, budget, first_hit, node_cap, rank_cap):  # pragma: no cover - jitted
    n, mc = R.shape

    RT = np.empty((mc, n), dtype=np.int64)
    for v in range(n):
        for c in range(mc):
            RT[c, v] = R[v, c]

    sufT = np.empty((mc + 1, n), dtype=np.int64)
    for v in range(n):
        sufT[mc, v] = INF
    for d in range(mc - 1, -1, -1):
        for v in range(n):
            x = RT[d, v]
            y = sufT[d + 1, v]
            sufT[d, v] = x if x < y else y

    lo_eff = lo if lo > 1 else np.int64(1)
    blimit = budget if budget >= 0 else INF - 1

    g = np.full(n, INF, dtype=np.int64)
    gstack = np.empty((mc, n), dtype=np.int64)
    incl = np.empty(max(k, 1), dtype=np.int64)
    nincl = 0

    found = False
    best_cost = INF
    best_cols = np.full(k, -1, dtype=np.int64)
    nodes = np.int64(0)
    aborted = False

    f = np.empty(n, dtype=np.int64)
    ghat = np.empty(n, dtype=np.int64)
    svc_buf = np.empty(lo_eff, dtype=np.int64)
    svc_buf2 = np.empty(lo_eff, dtype=np.int64)
    sel_small = np.empty(max(k, 1), dtype=np.int64)
    sel_small2 = np.empty(max(k, 1), dtype=np.int64)
    sel_large = np.empty(max(k, 1), dtype=np.int64)

    dstack = np.empty(mc + 2, dtype=np.int64)
    sstack = np.empty(mc + 2, dtype=np.int64)
    sp = 0
    dstack[0] = 0
    sstack[0] = 0

    while sp >= 0:
        d = dstack[sp]
        stage = sstack[sp]
        if stage == 0:
            nodes += 1
            if nodes > node_cap:
                aborted = True
                break
            limit = blimit
            if best_cost - 1 < limit:
                limit = best_cost - 1
            needed = k - nincl
            if needed == 0:
                cost = _leaf(RT, incl, k, lo, hi, g)
                if cost <= limit:
                    best_cost = cost
                    for t in range(k):
                        best_cols[t] = incl[t]
                    found = True
                    if first_hit:
                        break
                sp -= 1
                continue
            if d == mc or needed > mc - d:
                sp -= 1
                continue
            cap = rank_cap
            if limit + 1 < cap:
                cap = limit + 1
            b = _bound(RT, sufT, g, d, needed, lo_eff, incl, nincl, cap,
                       f, ghat, svc_buf, svc_buf2, sel_small, sel_large, sel_small2)
            if b > limit:
                sp -= 1
                continue
            sstack[sp] = 1
            for v in range(n):
                gstack[d, v] = g[v]
            incl[nincl] = d
            nincl += 1
            for v in range(n):
                x = RT[d, v]
                if x < g[v]:
                    g[v] = x
            sp += 1
            dstack[sp] = d + 1
            sstack[sp] = 0
            continue
        if stage == 1:
            for v in range(n):
                g[v] = gstack[d, v]
            nincl -= 1
            sstack[sp] = 2
            sp += 1
            dstack[sp] = d + 1
            sstack[sp] = 0
            continue
        sp -= 1

    completed = not aborted
    return found, (best_cost if found else np.int64(-1)), best_cols, nodes, completed


def search(R, k, lo, hi, budget, first_hit, node_cap, rank_cap):
    found, best, cols, nodes, completed = search_jit(
        R, k, lo, hi, budget, first_hit, node_cap, rank_cap
    )
    return bool(found), int(best), cols, int(nodes), bool(completed)
