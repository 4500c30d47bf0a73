"""Backend dispatch for the numeric kernels.

Two interchangeable implementations exist for each kernel: a
numba-jitted one (fast, compiled on first use) and a pure-numpy one
(no compilation, vectorized).  Both implement the identical algorithm
with identical tie-breaking, so costs, committees, and node counts
match exactly across backends.

Selection: the ``CCMONROE_BACKEND`` environment variable ("numba" or
"numpy") wins; otherwise numba is used when it imports cleanly, with
numpy as the fallback.  `set_backend` overrides at runtime (used by
tests and the benchmark).
"""

from __future__ import annotations

import os

import numpy as np


class BackendError(RuntimeError):
    """Backend selection failed (bad env value or numba unavailable)."""


_active: tuple | None = None


def _resolve(name: str) -> tuple:
    if name == "numpy":
        from ccmonroe._kernels import search_numpy, transport_numpy

        return ("numpy", transport_numpy.transport, search_numpy.search)
    if name == "numba":
        try:
            from ccmonroe._kernels import search_numba, transport_numba
        except ImportError as exc:
            raise BackendError(f"numba backend requested but unavailable: {exc}") from exc
        return ("numba", transport_numba.transport, search_numba.search)
    raise BackendError(f"unknown backend {name!r}, expected 'numpy' or 'numba'")


def _default_name() -> str:
    env = os.environ.get("CCMONROE_BACKEND", "").strip().lower()
    if env:
        if env not in ("numpy", "numba"):
            raise BackendError(
                f"CCMONROE_BACKEND must be 'numpy' or 'numba', got {env!r}"
            )
        return env
    try:
        import numba  # noqa: F401
    except ImportError:
        return "numpy"
    return "numba"


def _ensure() -> tuple:
    global _active
    if _active is None:
        _active = _resolve(_default_name())
    return _active


def active_backend() -> str:
    """Name of the backend that will run the next kernel call."""
    return _ensure()[0]


def set_backend(name: str | None) -> None:
    """Force a backend by name; None re-reads the environment lazily."""
    global _active
    _active = None if name is None else _resolve(name)


def transport(cost: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> tuple[int, np.ndarray]:
    """Min-cost transportation: rows ship 1 unit each, column j absorbs
    between lo[j] and hi[j] units.  Returns (total cost, row -> column map).
    """
    _, fn, _ = _ensure()
    cost = np.ascontiguousarray(cost, dtype=np.int64)
    lo = np.ascontiguousarray(lo, dtype=np.int64)
    hi = np.ascontiguousarray(hi, dtype=np.int64)
    if cost.ndim != 2 or cost.shape[0] < 1 or cost.shape[1] < 1:
        raise ValueError("cost matrix must be 2-D and nonempty")
    if lo.shape != (cost.shape[1],) or hi.shape != (cost.shape[1],):
        raise ValueError("lo/hi must have one entry per column")
    if (lo < 0).any() or (lo > hi).any():
        raise ValueError("need 0 <= lo <= hi per column")
    n = cost.shape[0]
    if not (int(lo.sum()) <= n <= int(hi.sum())):
        raise ValueError("infeasible quotas: need sum(lo) <= rows <= sum(hi)")
    total, assign = fn(cost, lo, hi)
    return int(total), assign


def search(
    ranks: np.ndarray,
    k: int,
    lo: int,
    hi: int,
    budget: int,
    first_hit: bool,
    node_cap: int,
    rank_cap: int,
) -> tuple[bool, int, np.ndarray, int, bool]:
    """Branch-and-bound committee search over the columns of `ranks`.

    Columns must already be in branching order.  `budget` is -1 for an
    unbudgeted (pure optimization) run.  Returns
    (found, best_cost, best_columns, nodes, completed).
    """
    _, _, fn = _ensure()
    ranks = np.ascontiguousarray(ranks, dtype=np.int64)
    return fn(
        ranks,
        np.int64(k),
        np.int64(lo),
        np.int64(hi),
        np.int64(budget),
        bool(first_hit),
        np.int64(node_cap),
        np.int64(rank_cap),
    )
