"""Pure-numpy transportation kernel.

Successive shortest augmenting paths with Johnson potentials on the
bipartite supply/demand network.  Column lower bounds use the
mandatory-flow transformation: each column absorbs exactly lo[j] units
itself and passes at most hi[j] - lo[j] surplus units on to a virtual
sink that absorbs the remaining n - sum(lo).

The outer loops (one per shipped unit, one per Dijkstra pop) stay in
Python; edge relaxations are whole-array operations.  Tie-breaking is
pinned everywhere (argmin picks the lowest node index) so the numba
twin produces identical flows.
"""

from __future__ import annotations

import numpy as np

INF = np.int64(2) ** 62


def transport(cost: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[np.int64, np.ndarray]:
    n, k = cost.shape
    snk = n + k  # node ids: rows 0..n-1, columns n..n+k-1, sink n+k
    nv = n + k + 1

    pot = np.zeros(nv, dtype=np.int64)
    flow = np.zeros((n, k), dtype=bool)  # unit on row->column arc
    through = np.zeros(k, dtype=np.int64)  # column->sink surplus units
    slack = (hi - lo).astype(np.int64)
    mand = lo.astype(np.int64).copy()  # mandatory units left per column
    sink_left = np.int64(n) - lo.sum()
    shipped = np.zeros(n, dtype=bool)

    rows = np.arange(n)
    for _ in range(n):
        dist = np.full(nv, INF, dtype=np.int64)
        prev = np.full(nv, -1, dtype=np.int64)
        done = np.zeros(nv, dtype=bool)
        dist[:n][~shipped] = 0

        target = -1
        while True:
            scan = np.where(done, INF, dist)
            u = int(np.argmin(scan))
            du = scan[u]
            if du >= INF:
                break
            done[u] = True
            if (n <= u < snk and mand[u - n] > 0) or (u == snk and sink_left > 0):
                target = u
                break
            if u < n:
                # row -> columns without flow
                rc = du + cost[u] + pot[u] - pot[n:snk]
                better = (~flow[u]) & (rc < dist[n:snk])
                dist[n:snk][better] = rc[better]
                prev[n:snk][better] = u
            elif u < snk:
                c = u - n
                # column -> rows carrying flow (residual arcs)
                rc = du - cost[:, c] + pot[u] - pot[:n]
                better = flow[:, c] & (rc < dist[:n])
                dist[:n][better] = rc[better]
                prev[:n][better] = u
                # column -> sink
                if through[c] < slack[c]:
                    rc2 = du + pot[u] - pot[snk]
                    if rc2 < dist[snk]:
                        dist[snk] = rc2
                        prev[snk] = u
            else:
                # sink -> columns with surplus flow (residual arcs)
                rc = du + pot[snk] - pot[n:snk]
                better = (through > 0) & (rc < dist[n:snk])
                dist[n:snk][better] = rc[better]
                prev[n:snk][better] = u

        if target < 0:
            raise RuntimeError("transportation network unexpectedly disconnected")

        pot += np.minimum(dist, dist[target])

        # flip flow along the augmenting path, then absorb at the target
        node = target
        while prev[node] >= 0:
            p = int(prev[node])
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

    assign = np.argmax(flow, axis=1).astype(np.int64)
    total = cost[rows, assign].sum()
    return np.int64(total), assign
