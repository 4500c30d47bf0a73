"""Empirical forward/backward verification of the hardness gadgets.

For a graph G and clique size h the generators promise: G has an
h-clique  <=>  the reduced instance admits a size-k committee within
budget beta.  `verify_equivalence` checks both directions on a
concrete graph by running the exact clique oracle against the exact
committee solver, evaluates the constructive witness when a clique
exists, and validates the structural properties that optimal
budget-priced assignments are expected to satisfy (only top-two ranks
used and, under Monroe, all filler alternatives selected with uniform
usage).

`batch_verify` scales that to graph families (directories, explicit
lists, or generated streams) with deterministic reports: results merge
sorted by graph id, timings are opt-in, and node caps replace wall
clocks, so the same inputs always produce byte-identical JSON.

Degenerate graphs (fewer than h vertices or fewer than C(h,2) edges)
are answered directly through the generator's trivially_no marker:
they cannot contain an h-clique and the gadget's guarantees are only
defined past those sizes, so no solve is attempted.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import itertools
import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ccmonroe.engine import AssignmentResult
from ccmonroe.profiles import RuleKind, misrepresentation_sum
from ccmonroe.reduction import (
    BLOCKER_COMPACT,
    Graph,
    GraphFormatError,
    ReducedInstance,
    ReductionParams,
    cc_reduction,
    cc_witness,
    find_clique,
    monroe_reduction,
    monroe_witness,
    parse_graph,
)
from ccmonroe.solvers import SolveStatus, solve_exact

DEFAULT_NODE_CAP = 10_000_000

STATUS_AGREE = "agree"
STATUS_DISAGREE = "disagree"
STATUS_INCONCLUSIVE = "inconclusive"
STATUS_ERROR = "error"


@dataclass(frozen=True)
class VerdictReport:
    """One graph's verdict.

    agree is None (and status "inconclusive") when the solver hit its
    node cap before deciding; such rows never count as agreement.
    status "error" marks inputs that could not even be read.
    """

    graph_id: str
    rule: str
    h: int
    n_vertices: int | None
    n_edges: int | None
    k: int | None
    beta: int | None
    L: int | None
    trivially_no: bool
    clique_found: bool
    clique: tuple[int, ...] | None
    budget_feasible: bool | None
    cost: int | None
    committee: tuple[int, ...] | None
    witness_cost: int | None
    claim1_ok: bool | None
    claim2_ok: bool | None
    agree: bool | None
    status: str
    nodes: int
    retried: bool
    first_status: str | None
    blocker_size: int | None
    error: str | None = None
    duration_s: float | None = None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        if d["clique"] is not None:
            d["clique"] = list(d["clique"])
        if d["committee"] is not None:
            d["committee"] = list(d["committee"])
        if d["duration_s"] is None:
            del d["duration_s"]
        return d


def check_claim1(inst: ReducedInstance, result: AssignmentResult) -> bool:
    """Structural check for budget-priced CC optima.

    True iff every voter sits at rank 0 or 1 and the committee uses
    only vertex alternatives, dummies, and edge alternatives (no
    blockers).
    """
    ranks = inst.profile.ranks
    a = np.asarray(result.assignment, dtype=np.int64)
    got = ranks[np.arange(ranks.shape[0]), a]
    if got.max(initial=0) > 1:
        return False
    return all(inst.alt_roles[int(c)].kind in ("u", "d", "e") for c in np.unique(a))


def check_claim2(inst: ReducedInstance, result: AssignmentResult) -> bool:
    """Structural check for budget-priced Monroe optima.

    True iff every filler alternative (all x_z and y_z) is in the
    committee, every voter sits at rank 0 or 1, and every used
    alternative represents exactly L voters.
    """
    ranks = inst.profile.ranks
    a = np.asarray(result.assignment, dtype=np.int64)
    got = ranks[np.arange(ranks.shape[0]), a]
    if got.max(initial=0) > 1:
        return False
    used = set(int(c) for c in np.unique(a))
    fillers = {
        i for i, role in enumerate(inst.alt_roles) if role.kind in ("x", "y")
    }
    if not fillers <= used:
        return False
    counts = np.bincount(a, minlength=inst.n_alternatives)
    return bool((counts[sorted(used)] == inst.L).all())


def _reduce(graph: Graph, h: int | None, rule: RuleKind, params: ReductionParams | None):
    if rule is RuleKind.CC:
        return cc_reduction(graph, h, params)
    return monroe_reduction(graph, h, params)


def verify_equivalence(
    graph: Graph,
    h: int | None = None,
    rule: RuleKind = RuleKind.CC,
    params: ReductionParams | None = None,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
    include_timings: bool = False,
    graph_id: str = "g0",
    _retry_of: str | None = None,
) -> VerdictReport:
    """Compare the clique oracle against the committee solver on one graph.

    The solver side runs a budgeted optimal solve, so on feasible
    instances the reported cost/committee is a true optimum and the
    claim validators apply to it.  A disagreement under compact
    blockers is retried once with doubled blocker size before being
    reported, to separate blocker sizing from construction bugs.
    """
    t0 = time.perf_counter()
    inst = _reduce(graph, h, rule, params)
    eff_h = inst.params.h
    clique = find_clique(graph, eff_h)
    clique_found = clique is not None

    witness_cost = None
    if clique_found and inst.profile is not None:
        if rule is RuleKind.CC:
            wit = cc_witness(graph, eff_h, clique, inst)
        else:
            wit = monroe_witness(graph, eff_h, clique, inst)
        witness_cost = int(misrepresentation_sum(inst.profile, wit))

    nodes = 0
    cost = None
    committee = None
    claim1_ok = None
    claim2_ok = None
    if inst.trivially_no or inst.profile is None:
        budget_feasible: bool | None = False
    else:
        out = solve_exact(
            inst.profile, inst.k, rule, budget=inst.beta, node_cap=node_cap
        )
        nodes = out.nodes_explored
        if out.status is SolveStatus.INCONCLUSIVE:
            budget_feasible = None
        elif out.status is SolveStatus.FEASIBLE:
            budget_feasible = True
            cost = out.cost
            committee = out.committee
            if rule is RuleKind.CC:
                claim1_ok = check_claim1(inst, out.result)
            else:
                claim2_ok = check_claim2(inst, out.result)
        else:
            budget_feasible = False

    if budget_feasible is None:
        agree = None
        status = STATUS_INCONCLUSIVE
    else:
        agree = clique_found == budget_feasible
        status = STATUS_AGREE if agree else STATUS_DISAGREE

    blocker_size = None
    if inst.params.blocker_mode == BLOCKER_COMPACT:
        blocker_size = (
            inst.params.blocker_size
            if inst.params.blocker_size is not None
            else inst.beta + 1
        )

    if (
        status == STATUS_DISAGREE
        and inst.params.blocker_mode == BLOCKER_COMPACT
        and _retry_of is None
    ):
        bigger = dataclasses.replace(inst.params, blocker_size=2 * blocker_size)
        return verify_equivalence(
            graph,
            None,
            rule,
            bigger,
            node_cap=node_cap,
            include_timings=include_timings,
            graph_id=graph_id,
            _retry_of=status,
        )

    return VerdictReport(
        graph_id=graph_id,
        rule=rule.value,
        h=eff_h,
        n_vertices=graph.n_vertices,
        n_edges=graph.n_edges,
        k=inst.k,
        beta=inst.beta,
        L=inst.L,
        trivially_no=inst.trivially_no,
        clique_found=clique_found,
        clique=clique,
        budget_feasible=budget_feasible,
        cost=cost,
        committee=committee,
        witness_cost=witness_cost,
        claim1_ok=claim1_ok,
        claim2_ok=claim2_ok,
        agree=agree,
        status=status,
        nodes=nodes,
        retried=_retry_of is not None,
        first_status=_retry_of,
        blocker_size=blocker_size,
        duration_s=(time.perf_counter() - t0) if include_timings else None,
    )


def _error_report(graph_id: str, rule: RuleKind, h: int, message: str) -> VerdictReport:
    return VerdictReport(
        graph_id=graph_id,
        rule=rule.value,
        h=h,
        n_vertices=None,
        n_edges=None,
        k=None,
        beta=None,
        L=None,
        trivially_no=False,
        clique_found=False,
        clique=None,
        budget_feasible=None,
        cost=None,
        committee=None,
        witness_cost=None,
        claim1_ok=None,
        claim2_ok=None,
        agree=None,
        status=STATUS_ERROR,
        nodes=0,
        retried=False,
        first_status=None,
        blocker_size=None,
        error=message,
    )


@dataclass(frozen=True)
class BatchReport:
    reports: tuple[VerdictReport, ...]
    summary: dict

    @property
    def exit_code(self) -> int:
        """0 all agree; 2 any disagreement; 3 inconclusive or unreadable
        items without a disagreement."""
        if self.summary["disagree"] > 0:
            return 2
        if self.summary["inconclusive"] > 0 or self.summary["error"] > 0:
            return 3
        return 0


def family_graphs(descriptor: str, *, default_seed: int = 0):
    """Expand a family descriptor string into (id, Graph) pairs.

    Grammar: MODE:N[:key=value ...] with modes "exhaustive" (all
    labeled simple graphs on N vertices), "iso" (one representative
    per isomorphism class), and "random" (seeded G(N, p) draws).
    Optional keys: min-edges=M for every mode; count=C, p=F, seed=S
    for random mode.  Ids are the zero-padded stream index, so a
    fixed descriptor always yields the same ids.
    """
    parts = descriptor.split(":")
    if len(parts) < 2:
        raise ValueError(f"family descriptor {descriptor!r} needs MODE:N")
    mode, n_text = parts[0], parts[1]
    try:
        n = int(n_text)
    except ValueError:
        raise ValueError(f"family descriptor {descriptor!r}: bad vertex count {n_text!r}")
    opts: dict[str, str] = {}
    for part in parts[2:]:
        key, sep, value = part.partition("=")
        if not sep or not value:
            raise ValueError(f"family descriptor {descriptor!r}: bad option {part!r}")
        opts[key] = value
    known = {"min-edges"} | ({"count", "p", "seed"} if mode == "random" else set())
    for key in opts:
        if key not in known:
            raise ValueError(f"family descriptor {descriptor!r}: unknown option {key!r}")
    min_edges = int(opts.get("min-edges", 0))
    predicate = None if min_edges <= 0 else (lambda g: g.n_edges >= min_edges)
    if mode == "exhaustive":
        stream = enumerate_graphs(n, mode="exhaustive", predicate=predicate)
    elif mode == "iso":
        stream = enumerate_graphs(n, mode="isomorphism_free", predicate=predicate)
    elif mode == "random":
        stream = enumerate_graphs(
            n,
            mode="random",
            predicate=predicate,
            count=int(opts.get("count", 50)),
            edge_probability=float(opts.get("p", 0.5)),
            seed=int(opts.get("seed", default_seed)),
        )
    else:
        raise ValueError(f"family descriptor {descriptor!r}: unknown mode {mode!r}")
    for idx, g in enumerate(stream):
        yield f"g{idx:05d}", g


def _collect_graphs(source, rule: RuleKind, h: int, seed: int = 0):
    """Normalize a graph source into ([(id, Graph)], [error reports])."""
    items: list[tuple[str, Graph]] = []
    errors: list[VerdictReport] = []
    if isinstance(source, (str, Path)):
        root = Path(source)
        if not root.is_dir():
            if isinstance(source, str) and ":" in source:
                return list(family_graphs(source, default_seed=seed)), errors
            raise NotADirectoryError(f"{root} is not a directory or family descriptor")
        for path in sorted(root.iterdir()):
            if not path.is_file():
                continue
            gid = path.stem
            try:
                items.append((gid, parse_graph(path.read_text())))
            except (OSError, GraphFormatError) as exc:
                errors.append(_error_report(gid, rule, h, str(exc)))
        return items, errors
    for idx, entry in enumerate(source):
        if isinstance(entry, Graph):
            items.append((f"g{idx:04d}", entry))
        else:
            gid, graph = entry
            items.append((str(gid), graph))
    return items, errors


def _verify_one(args) -> VerdictReport:
    graph_id, graph, rule, params, node_cap, include_timings = args
    return verify_equivalence(
        graph,
        None,
        rule,
        params,
        node_cap=node_cap,
        include_timings=include_timings,
        graph_id=graph_id,
    )


def batch_verify(
    source,
    h: int | None = None,
    rule: RuleKind = RuleKind.CC,
    params: ReductionParams | None = None,
    *,
    jobs: int = 1,
    node_cap: int = DEFAULT_NODE_CAP,
    include_timings: bool = False,
    seed: int = 0,
) -> BatchReport:
    """Verify a family of graphs and aggregate the verdicts.

    `source` is a directory path (each file parsed as one graph, id =
    file stem), a family descriptor string (see `family_graphs`), an
    iterable of Graph (ids g0000, g0001, ...), or an iterable of
    (id, Graph) pairs.  `seed` is the fallback seed for random family
    descriptors.  With jobs > 1 the per-graph work runs in a process
    pool; reports always merge sorted by graph id so the output does
    not depend on scheduling.
    """
    if params is None:
        params = ReductionParams(h=3 if h is None else h)
    elif h is not None and h != params.h:
        raise ValueError(f"h argument {h} conflicts with params.h {params.h}")
    items, reports = _collect_graphs(source, rule, params.h, seed)
    tasks = [
        (gid, graph, rule, params, node_cap, include_timings) for gid, graph in items
    ]
    if jobs > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            reports.extend(pool.map(_verify_one, tasks))
    else:
        reports.extend(_verify_one(t) for t in tasks)
    reports.sort(key=lambda r: r.graph_id)
    summary = {
        "total": len(reports),
        "agree": sum(r.status == STATUS_AGREE for r in reports),
        "disagree": sum(r.status == STATUS_DISAGREE for r in reports),
        "inconclusive": sum(r.status == STATUS_INCONCLUSIVE for r in reports),
        "error": sum(r.status == STATUS_ERROR for r in reports),
    }
    return BatchReport(reports=tuple(reports), summary=summary)


def batch_report_json(report: BatchReport) -> str:
    obj = {
        "reports": [r.to_dict() for r in report.reports],
        "summary": report.summary,
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def batch_report_table(report: BatchReport) -> str:
    """Aligned text table, one row per graph."""
    head = ("id", "rule", "verts", "edges", "clique", "feasible", "status", "cost", "nodes")
    rows = [head]
    for r in report.reports:
        rows.append(
            (
                r.graph_id,
                r.rule,
                "-" if r.n_vertices is None else str(r.n_vertices),
                "-" if r.n_edges is None else str(r.n_edges),
                "yes" if r.clique_found else "no",
                "-" if r.budget_feasible is None else ("yes" if r.budget_feasible else "no"),
                r.status,
                "-" if r.cost is None else str(r.cost),
                str(r.nodes),
            )
        )
    widths = [max(len(row[c]) for row in rows) for c in range(len(head))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    s = report.summary
    lines.append(
        f"total {s['total']}  agree {s['agree']}  disagree {s['disagree']}  "
        f"inconclusive {s['inconclusive']}  error {s['error']}"
    )
    return "\n".join(lines) + "\n"


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _graph_mask(graph: Graph, pairs: list[tuple[int, int]]) -> int:
    index = {p: t for t, p in enumerate(pairs)}
    mask = 0
    for e in graph.edges:
        mask |= 1 << index[e]
    return mask


def _mask_graph(n: int, mask: int, pairs: list[tuple[int, int]]) -> Graph:
    return Graph(n, tuple(p for t, p in enumerate(pairs) if mask >> t & 1))


def canonical_form(graph: Graph) -> int:
    """Smallest edge bitmask over all vertex relabelings.

    Two graphs are isomorphic exactly when their canonical forms match.
    Brute force over n! permutations; intended for n <= 8.
    """
    n = graph.n_vertices
    pairs = _pairs(n)
    index = {p: t for t, p in enumerate(pairs)}
    best = None
    for perm in itertools.permutations(range(n)):
        mask = 0
        for u, v in graph.edges:
            a, b = perm[u], perm[v]
            if a > b:
                a, b = b, a
            mask |= 1 << index[(a, b)]
        if best is None or mask < best:
            best = mask
    return 0 if best is None else best


def canonical_table(n: int) -> np.ndarray:
    """canon[mask] = canonical form of the n-vertex graph with that edge mask.

    Vectorized over all 2^C(n,2) labeled graphs at once; one gather and
    one running minimum per vertex permutation.  Entries equal to their
    own index are the class representatives.
    """
    pairs = _pairs(n)
    T = len(pairs)
    index = {p: t for t, p in enumerate(pairs)}
    total = 1 << T
    masks = np.arange(total, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(T)[None, :]) & 1  # (total, T)
    weights = (np.int64(1) << np.arange(T)).astype(np.int64)
    canon = masks.copy()
    for perm in itertools.permutations(range(n)):
        gather = np.empty(T, dtype=np.int64)
        for t, (u, v) in enumerate(pairs):
            a, b = perm[u], perm[v]
            if a > b:
                a, b = b, a
            gather[t] = index[(a, b)]
        remapped = bits[:, gather] @ weights
        np.minimum(canon, remapped, out=canon)
    return canon


def _iso_representative_masks(n: int) -> np.ndarray:
    """Masks of the lexicographically-least member of every isomorphism
    class of labeled graphs on n vertices."""
    canon = canonical_table(n)
    masks = np.arange(canon.size, dtype=np.int64)
    return masks[canon == masks]


def enumerate_graphs(
    n_vertices: int,
    *,
    mode: str = "exhaustive",
    predicate=None,
    count: int = 50,
    edge_probability: float = 0.5,
    seed: int = 0,
):
    """Stream graphs on n_vertices.

    mode "exhaustive": every labeled simple graph, ascending edge
    bitmask (n_vertices <= 8).  mode "isomorphism_free": one
    representative per isomorphism class (n_vertices <= 6).  mode
    "random": `count` seeded G(n, p) draws; with a predicate, rejection
    sampling keeps drawing until `count` graphs pass.  Fixed inputs
    give an identical stream every run.
    """
    pairs = _pairs(n_vertices)
    if mode == "exhaustive":
        if n_vertices > 8:
            raise ValueError("exhaustive enumeration is limited to 8 vertices")
        for mask in range(1 << len(pairs)):
            g = _mask_graph(n_vertices, mask, pairs)
            if predicate is None or predicate(g):
                yield g
    elif mode == "isomorphism_free":
        if n_vertices > 6:
            raise ValueError("isomorphism-free enumeration is limited to 6 vertices")
        for mask in _iso_representative_masks(n_vertices):
            g = _mask_graph(n_vertices, int(mask), pairs)
            if predicate is None or predicate(g):
                yield g
    elif mode == "random":
        if not 0.0 <= edge_probability <= 1.0:
            raise ValueError("edge_probability must be in [0, 1]")
        rng = np.random.default_rng(seed)
        produced = 0
        attempts = 0
        limit = max(1000, 1000 * count)
        while produced < count:
            attempts += 1
            if attempts > limit:
                raise RuntimeError(
                    f"rejection sampling exceeded {limit} draws; predicate too strict"
                )
            keep = rng.random(len(pairs)) < edge_probability
            g = Graph(n_vertices, tuple(p for t, p in enumerate(pairs) if keep[t]))
            if predicate is None or predicate(g):
                produced += 1
                yield g
    else:
        raise ValueError(f"unknown mode {mode!r}")
