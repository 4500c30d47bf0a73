"""Timing comparison of the numpy and numba kernel backends.

Runs the two hot paths at gadget scale: the quota transportation solve
(behind optimal_assignment_for_committee) and the budgeted
branch-and-bound search (behind solve_exact).  Each workload is timed
per backend and the table reports best-of-N wall times.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from ccmonroe import (
    Graph,
    RuleKind,
    cc_reduction,
    monroe_reduction,
    monroe_witness,
    optimal_assignment_for_committee,
    solve_exact,
)
from ccmonroe._kernels import BackendError, set_backend

K6 = Graph(6, tuple((a, b) for a in range(6) for b in range(a + 1, 6)))
G69 = Graph(6, ((0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 5), (0, 5)))


def build_workloads():
    cc_inst = cc_reduction(K6, h=3)
    mon_inst = monroe_reduction(G69, h=3)
    witness = monroe_witness(G69, 3, (0, 1, 2), mon_inst)
    committee = sorted(int(c) for c in np.unique(witness))

    def transport_monroe():
        r = optimal_assignment_for_committee(mon_inst.profile, committee, RuleKind.MONROE)
        assert r.cost == 42

    def search_cc():
        out = solve_exact(cc_inst.profile, cc_inst.k, RuleKind.CC, budget=cc_inst.beta)
        assert out.cost == 21

    def search_monroe():
        out = solve_exact(
            mon_inst.profile, mon_inst.k, RuleKind.MONROE, budget=mon_inst.beta
        )
        assert out.cost == 42

    return [
        ("transport (monroe gadget, 112x16)", transport_monroe),
        ("search (cc gadget on K6)", search_cc),
        ("search (monroe gadget on G69)", search_monroe),
    ]


def time_workload(fn, repeats: int) -> float:
    fn()  # warm-up; lets numba finish compiling outside the timed runs
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5, help="timed runs per cell (default 5)")
    args = ap.parse_args()

    workloads = build_workloads()
    results: dict[str, dict[str, float]] = {name: {} for name, _ in workloads}
    backends = []
    for backend in ("numpy", "numba"):
        try:
            set_backend(backend)
        except BackendError as exc:
            print(f"skipping {backend}: {exc}")
            continue
        backends.append(backend)
        for name, fn in workloads:
            results[name][backend] = time_workload(fn, args.repeats)
    set_backend(None)

    width = max(len(name) for name, _ in workloads)
    header = f"{'workload'.ljust(width)}  " + "  ".join(f"{b:>10}" for b in backends)
    if len(backends) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for name, _ in workloads:
        row = f"{name.ljust(width)}  "
        row += "  ".join(f"{results[name][b] * 1000:9.2f}ms" for b in backends)
        if len(backends) == 2:
            row += f"  {results[name]['numpy'] / results[name]['numba']:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
