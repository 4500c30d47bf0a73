"""Numba-jitted transportation kernel.

Same successive-shortest-paths algorithm as `transport_numpy`, written
with explicit loops for the compiler.  Pop order, relaxation
comparisons, and path reconstruction mirror the numpy twin exactly,
so both backends return identical flows, not just identical costs.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF = np.int64(2) ** 62


@njit(cache=True)
def transport_jit(cost, lo, hi):  # pragma: no cover - exercised via dispatch
    n, k = cost.shape
    snk = n + k
    nv = n + k + 1

    pot = np.zeros(nv, dtype=np.int64)
    flow = np.zeros((n, k), dtype=np.bool_)
    through = np.zeros(k, dtype=np.int64)
    mand = lo.copy()
    sink_left = np.int64(n)
    for c in range(k):
        sink_left -= lo[c]
    shipped = np.zeros(n, dtype=np.bool_)

    dist = np.empty(nv, dtype=np.int64)
    prev = np.empty(nv, dtype=np.int64)
    done = np.empty(nv, dtype=np.bool_)

    for _ in range(n):
        for i in range(nv):
            dist[i] = INF
            prev[i] = -1
            done[i] = False
        for v in range(n):
            if not shipped[v]:
                dist[v] = 0

        target = -1
        while True:
            u = -1
            du = INF
            for i in range(nv):
                if not done[i] and dist[i] < du:
                    du = dist[i]
                    u = i
            if u < 0:
                break
            done[u] = True
            if (n <= u < snk and mand[u - n] > 0) or (u == snk and sink_left > 0):
                target = u
                break
            if u < n:
                for c in range(k):
                    if not flow[u, c]:
                        rc = du + cost[u, c] + pot[u] - pot[n + c]
                        if rc < dist[n + c]:
                            dist[n + c] = rc
                            prev[n + c] = u
            elif u < snk:
                c = u - n
                for v in range(n):
                    if flow[v, c]:
                        rc = du - cost[v, c] + pot[u] - pot[v]
                        if rc < dist[v]:
                            dist[v] = rc
                            prev[v] = u
                if through[c] < hi[c] - lo[c]:
                    rc2 = du + pot[u] - pot[snk]
                    if rc2 < dist[snk]:
                        dist[snk] = rc2
                        prev[snk] = u
            else:
                for c in range(k):
                    if through[c] > 0:
                        rc = du + pot[snk] - pot[n + c]
                        if rc < dist[n + c]:
                            dist[n + c] = rc
                            prev[n + c] = u

        if target < 0:
            raise RuntimeError("transportation network unexpectedly disconnected")

        dt = dist[target]
        for i in range(nv):
            if dist[i] < dt:
                pot[i] += dist[i]
            else:
                pot[i] += dt

        node = target
        while prev[node] >= 0:
            p = prev[node]
            if p < n:
                flow[p, node - n] = True
            elif node < n:
                flow[node, p - n] = False
            elif node == snk:
                through[p - n] += 1
            else:
                through[node - n] -= 1
            node = p
        shipped[node] = True
        if target == snk:
            sink_left -= 1
        else:
            mand[target - n] -= 1

    assign = np.empty(n, dtype=np.int64)
    total = np.int64(0)
    for v in range(n):
        a = 0
        for c in range(k):
            if flow[v, c]:
                a = c
                break
        assign[v] = a
        total += cost[v, a]
    return total, assign


def transport(cost, lo, hi):
    return transport_jit(cost, lo, hi)
