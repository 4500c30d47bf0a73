"""Clique-to-committee hardness gadgets for the CC and Monroe rules.

Given a simple undirected graph and a clique size h, these generators
emit a preference profile, a committee size k, and a budget beta such
that the graph has an h-clique exactly when some size-k committee
admits an assignment of total misrepresentation at most beta.  One
parameterization targets exact-usage CC, the other targets Monroe with
its balanced quotas.

Every alternative and voter carries a GadgetRole describing its job in
the gadget (vertex alternative, dummy, blocker, edge voter, ...), and
the forward direction is constructive: given an actual h-clique,
`cc_witness` / `monroe_witness` write down an assignment hitting beta
exactly.

Vertices, edges, and all role indices are 0-based.  Tie-breaking
freedom in the construction (order inside blocker sets, order of the
low-preference tail) is canonicalized to ascending id so that generated
instances are byte-reproducible.
"""

from __future__ import annotations

import itertools
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ccmonroe.profiles import (
    PreferenceProfile,
    RuleKind,
    misrepresentation_sum,
    validate_assignment,
)

BLOCKER_COMPACT = "compact"
BLOCKER_PAPER = "paper"


class GraphFormatError(ValueError):
    """Raised when graph text cannot be parsed; carries a 1-based line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class StrictScaleError(ValueError):
    """Strict-mode rejection: the graph is too small for the blocker sizing
    to guarantee soundness of the reduction."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with 0-based vertices.

    Edges normalize to (low, high) pairs sorted lexicographically; the
    position of an edge in `edges` is its edge id everywhere else in
    this module.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ValueError("n_vertices must be >= 0")
        normalized = []
        for pair in self.edges:
            u, v = int(pair[0]), int(pair[1])
            if u == v:
                raise ValueError(f"loop edge ({u}, {v}) not allowed")
            if u > v:
                u, v = v, u
            if not (0 <= u < v < self.n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range for {self.n_vertices} vertices")
            normalized.append((u, v))
        normalized.sort()
        for a, b in zip(normalized, normalized[1:]):
            if a == b:
                raise ValueError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(normalized))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n_vertices, self.n_vertices), dtype=bool)
        for u, v in self.edges:
            adj[u, v] = adj[v, u] = True
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in set(self.edges)


def parse_graph(text: str) -> Graph:
    """Parse a line-oriented edge list.

    Accepted lines: `u v` (0-based endpoints), optional header
    `p <n> <m>` (or DIMACS `p edge <n> <m>`), DIMACS edges `e u v`
    (1-based), comments starting with `#` or a lone `c`.
    """
    n_decl: int | None = None
    m_decl: int | None = None
    edges: list[tuple[int, int]] = []
    max_seen = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] == "c":
            continue
        try:
            if tok[0] == "p":
                nums = [t for t in tok[1:] if not t.isalpha()]
                if len(nums) != 2:
                    raise ValueError
                n_decl, m_decl = int(nums[0]), int(nums[1])
                continue
            if tok[0] == "e":
                if len(tok) != 3:
                    raise ValueError
                u, v = int(tok[1]) - 1, int(tok[2]) - 1
            else:
                if len(tok) != 2:
                    raise ValueError
                u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise GraphFormatError(f"cannot parse {line!r}", lineno) from None
        if u == v:
            raise GraphFormatError(f"loop edge on vertex {u}", lineno)
        if u < 0 or v < 0:
            raise GraphFormatError(f"negative vertex in {line!r}", lineno)
        edges.append((u, v))
        max_seen = max(max_seen, u, v)
    n = n_decl if n_decl is not None else max_seen + 1
    if max_seen >= n:
        raise GraphFormatError(f"vertex {max_seen} exceeds declared count {n}")
    try:
        g = Graph(n, tuple(edges))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
    if m_decl is not None and g.n_edges != m_decl:
        raise GraphFormatError(f"header declares {m_decl} edges, found {g.n_edges}")
    return g


def serialize_graph(graph: Graph) -> str:
    lines = [f"p {graph.n_vertices} {graph.n_edges}"]
    lines.extend(f"{u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def find_clique(graph: Graph, h: int) -> tuple[int, ...] | None:
    """Lexicographically first h-clique, or None.

    Plain enumeration over vertex subsets; this is the ground-truth
    side of the equivalence harness, so it stays independent of the
    solvers.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    if h > graph.n_vertices:
        return None
    adj = graph.adjacency()
    for subset in itertools.combinations(range(graph.n_vertices), h):
        if all(adj[a, b] for a, b in itertools.combinations(subset, 2)):
            return subset
    return None


def has_triangle(graph: Graph) -> bool:
    return find_clique(graph, 3) is not None


@dataclass(frozen=True)
class ReductionParams:
    """Knobs of the construction.

    s2 defaults to h when left as None.  blocker_mode "compact" sizes
    every blocker family to blocker_size (default beta + 1, the
    smallest provably inert size); "paper" uses the sizes from the
    original analysis (|A_i| = n, |B_j| = m, |F_c| = n + m), which are
    only sound once min(n, m) exceeds beta.  strict mode refuses graphs
    below that scale outright.
    """

    h: int = 3
    s1: int = 1
    s2: int | None = None
    blocker_mode: str = BLOCKER_COMPACT
    blocker_size: int | None = None
    strict: bool = False

    def __post_init__(self):
        if self.h < 3:
            raise ValueError("h must be >= 3")
        if self.s1 < 1:
            raise ValueError("s1 must be >= 1")
        if self.s2 is not None and self.s2 < 1:
            raise ValueError("s2 must be >= 1")
        if self.blocker_mode not in (BLOCKER_COMPACT, BLOCKER_PAPER):
            raise ValueError(f"unknown blocker_mode {self.blocker_mode!r}")
        if self.blocker_mode == BLOCKER_PAPER and self.blocker_size is not None:
            raise ValueError("blocker_size only applies to compact mode")
        if self.blocker_size is not None and self.blocker_size < 1:
            raise ValueError("blocker_size must be >= 1")

    @property
    def s2_effective(self) -> int:
        return self.h if self.s2 is None else self.s2


@dataclass(frozen=True)
class GadgetRole:
    """Tagged role of one alternative or voter inside a reduced instance.

    Alternative kinds: "u" (vertex alternative, fields (i,)), "d"
    (dummy, (i,)), "A" (vertex blocker, (i, t)), "e" (edge alternative,
    (j,)), "B" (edge blocker, (j, t)), and for Monroe "Ahat"/"Bhat"
    (side blockers), "x"/"y" (usage-filler alternatives, (z,)), and
    "Fx"/"Fy" (filler blockers, (z, t)).

    Voter kinds: "v" (vertex voter, (i, z)), "w" (edge voter,
    (j, endpoint_vertex, z)), "vhat" (vertex-side filler voter,
    (i, z, r)), "what" (edge-side filler voter, (j, z)), "vhat0" /
    "what0" (pure filler voters, (z, r)).
    """

    kind: str
    fields: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        return ":".join([self.kind, *map(str, self.fields)])

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class ReducedInstance:
    """A generated hardness instance plus all bookkeeping.

    trivially_no is set when the graph is too small to contain any
    h-clique (fewer than h vertices or fewer than C(h,2) edges); the
    profile is still generated whenever the closed-form k is at least
    1, but the equivalence guarantee is vacuous on such instances and
    the harness answers them directly.
    """

    rule: RuleKind
    graph: Graph
    params: ReductionParams
    k: int
    beta: int
    L: int | None
    profile: PreferenceProfile | None
    alt_roles: tuple[GadgetRole, ...]
    voter_roles: tuple[GadgetRole, ...]
    trivially_no: bool
    _alt_by_label: dict = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        by_label = {role.label: idx for idx, role in enumerate(self.alt_roles)}
        if len(by_label) != len(self.alt_roles):
            raise RuntimeError("alternative role labels are not distinct")
        voter_labels = {r.label for r in self.voter_roles}
        if len(voter_labels) != len(self.voter_roles):
            raise RuntimeError("voter role labels are not distinct")
        object.__setattr__(self, "_alt_by_label", by_label)

    @property
    def n_alternatives(self) -> int:
        return len(self.alt_roles)

    @property
    def n_voters(self) -> int:
        return len(self.voter_roles)

    def alternative(self, label: str) -> int:
        """Alternative id for a role label such as "u:2" or "A:0:5"."""
        return self._alt_by_label[label]


def _blocker_sizes(params: ReductionParams, beta: int, nhat: int, mhat: int) -> dict:
    if params.blocker_mode == BLOCKER_COMPACT:
        b = params.blocker_size if params.blocker_size is not None else beta + 1
        if b < beta + 1:
            raise ValueError(
                f"compact blocker size {b} is below beta + 1 = {beta + 1}; "
                "smaller blocker sets can absorb budget-priced assignments"
            )
        return {"A": b, "B": b, "Ahat": b, "Bhat": b, "F": b}
    return {"A": nhat, "B": mhat, "Ahat": nhat, "Bhat": mhat, "F": nhat + mhat}


def _scale_check(params: ReductionParams, beta: int, nhat: int, mhat: int) -> None:
    h3 = params.h**3
    if params.strict:
        if min(nhat, mhat) <= beta:
            raise StrictScaleError(
                f"strict mode: min(n, m) = {min(nhat, mhat)} <= beta = {beta}; "
                "paper-scale soundness requires larger graphs"
            )
        if nhat < h3 or mhat < h3:
            raise StrictScaleError(
                f"strict mode: graph scale ({nhat} vertices, {mhat} edges) is below h^3 = {h3}"
            )
    elif params.blocker_mode == BLOCKER_PAPER and min(nhat, mhat) <= beta:
        warnings.warn(
            f"paper blocker sizes with min(n, m) = {min(nhat, mhat)} <= beta = {beta}: "
            "blocker sets this small do not guarantee the backward direction",
            stacklevel=3,
        )


def _rows_from_prefixes(m: int, prefixes: list[list[int]]) -> np.ndarray:
    """Rank matrix where each voter ranks their prefix first, then every
    remaining alternative in ascending id order."""
    n = len(prefixes)
    ranks = np.empty((n, m), dtype=np.int64)
    for v, prefix in enumerate(prefixes):
        p = np.asarray(prefix, dtype=np.int64)
        mask = np.ones(m, dtype=bool)
        mask[p] = False
        row = ranks[v]
        row[p] = np.arange(p.size)
        row[np.flatnonzero(mask)] = np.arange(p.size, m)
    return ranks


class _Layout:
    """Contiguous id layout: u, d, A-blocks, e, B-blocks, then for
    Monroe Ahat-blocks, Bhat-blocks, x, y, F-blocks."""

    def __init__(self, nhat: int, mhat: int, sizes: dict, monroe: bool, nx: int = 0, ny: int = 0):
        self.nhat, self.mhat = nhat, mhat
        self.sizes = sizes
        self.monroe = monroe
        self.nx, self.ny = nx, ny
        off = 0
        self.off_u = off
        off += nhat
        self.off_d = off
        off += nhat
        self.off_A = off
        off += nhat * sizes["A"]
        self.off_e = off
        off += mhat
        self.off_B = off
        off += mhat * sizes["B"]
        if monroe:
            self.off_Ahat = off
            off += nhat * sizes["Ahat"]
            self.off_Bhat = off
            off += mhat * sizes["Bhat"]
            self.off_x = off
            off += nx
            self.off_y = off
            off += ny
            self.off_F = off
            off += (nx + ny) * sizes["F"]
        self.m = off

    def u(self, i: int) -> int:
        return self.off_u + i

    def d(self, i: int) -> int:
        return self.off_d + i

    def A(self, i: int, t: int) -> int:
        return self.off_A + i * self.sizes["A"] + t

    def e(self, j: int) -> int:
        return self.off_e + j

    def B(self, j: int, t: int) -> int:
        return self.off_B + j * self.sizes["B"] + t

    def Ahat(self, i: int, t: int) -> int:
        return self.off_Ahat + i * self.sizes["Ahat"] + t

    def Bhat(self, j: int, t: int) -> int:
        return self.off_Bhat + j * self.sizes["Bhat"] + t

    def x(self, z: int) -> int:
        return self.off_x + z

    def y(self, z: int) -> int:
        return self.off_y + z

    def Fx(self, z: int, t: int) -> int:
        return self.off_F + z * self.sizes["F"] + t

    def Fy(self, z: int, t: int) -> int:
        return self.off_F + (self.nx + z) * self.sizes["F"] + t

    def alt_roles(self) -> list[GadgetRole]:
        roles = [GadgetRole("u", (i,)) for i in range(self.nhat)]
        roles += [GadgetRole("d", (i,)) for i in range(self.nhat)]
        roles += [
            GadgetRole("A", (i, t))
            for i in range(self.nhat)
            for t in range(self.sizes["A"])
        ]
        roles += [GadgetRole("e", (j,)) for j in range(self.mhat)]
        roles += [
            GadgetRole("B", (j, t))
            for j in range(self.mhat)
            for t in range(self.sizes["B"])
        ]
        if self.monroe:
            roles += [
                GadgetRole("Ahat", (i, t))
                for i in range(self.nhat)
                for t in range(self.sizes["Ahat"])
            ]
            roles += [
                GadgetRole("Bhat", (j, t))
                for j in range(self.mhat)
                for t in range(self.sizes["Bhat"])
            ]
            roles += [GadgetRole("x", (z,)) for z in range(self.nx)]
            roles += [GadgetRole("y", (z,)) for z in range(self.ny)]
            roles += [
                GadgetRole("Fx", (z, t))
                for z in range(self.nx)
                for t in range(self.sizes["F"])
            ]
            roles += [
                GadgetRole("Fy", (z, t))
                for z in range(self.ny)
                for t in range(self.sizes["F"])
            ]
        assert len(roles) == self.m
        return roles


def _base_voters(graph: Graph, params: ReductionParams, lay: _Layout):
    """Vertex and edge voters shared by both parameterizations.

    Vertex voter for vertex i (s1 copies): d_i, u_i, then i's A-block.
    Edge voters for edge j = (a, b) (s2 copies per endpoint): e_j, the
    endpoint's vertex alternative, then j's B-block.
    """
    s1, s2 = params.s1, params.s2_effective
    roles: list[GadgetRole] = []
    prefixes: list[list[int]] = []
    for i in range(lay.nhat):
        pre = [lay.d(i), lay.u(i)] + [lay.A(i, t) for t in range(lay.sizes["A"])]
        for z in range(s1):
            roles.append(GadgetRole("v", (i, z)))
            prefixes.append(pre)
    for j, (a, b) in enumerate(graph.edges):
        block = [lay.B(j, t) for t in range(lay.sizes["B"])]
        for endpoint in (a, b):
            pre = [lay.e(j), lay.u(endpoint)] + block
            for z in range(s2):
                roles.append(GadgetRole("w", (j, endpoint, z)))
                prefixes.append(pre)
    return roles, prefixes


def base_construction(graph: Graph, params: ReductionParams):
    """The common gadget core: alternatives and fully ordered voters.

    Returns (alt_roles, voter_roles, rank_matrix) for the CC-shaped
    universe (vertex alternatives, dummies, A-blockers, edge
    alternatives, B-blockers).  Blocker sizing follows the params; in
    compact mode the default size beta+1 is computed for the CC budget.
    """
    h, s1, s2 = params.h, params.s1, params.s2_effective
    beta = s1 * h + s2 * 2 * math.comb(h, 2)
    nhat, mhat = graph.n_vertices, graph.n_edges
    _scale_check(params, beta, nhat, mhat)
    sizes = _blocker_sizes(params, beta, nhat, mhat)
    lay = _Layout(nhat, mhat, sizes, monroe=False)
    roles, prefixes = _base_voters(graph, params, lay)
    ranks = _rows_from_prefixes(lay.m, prefixes)
    return lay.alt_roles(), roles, ranks


def _resolve_h(h: int | None, params: ReductionParams | None) -> ReductionParams:
    if params is None:
        return ReductionParams(h=3 if h is None else h)
    if h is not None and h != params.h:
        raise ValueError(f"h argument {h} conflicts with params.h {params.h}")
    return params


def cc_reduction(
    graph: Graph, h: int | None = None, params: ReductionParams | None = None
) -> ReducedInstance:
    """Clique instance -> exact-usage CC budget instance.

    k = m - C(h,2) + n (graph counts), beta = s1*h + 2*s2*C(h,2).  The
    graph has an h-clique iff some size-k committee reaches total
    misrepresentation beta (witnessed constructively by cc_witness).
    """
    params = _resolve_h(h, params)
    h, s1, s2 = params.h, params.s1, params.s2_effective
    nhat, mhat = graph.n_vertices, graph.n_edges
    k = mhat - math.comb(h, 2) + nhat
    beta = s1 * h + s2 * 2 * math.comb(h, 2)
    trivially_no = nhat < h or mhat < math.comb(h, 2)
    profile = None
    alt_roles: tuple[GadgetRole, ...] = ()
    voter_roles: tuple[GadgetRole, ...] = ()
    if k >= 1 and nhat >= 1 and mhat >= 1:
        alts, voters, ranks = base_construction(graph, params)
        profile = PreferenceProfile(ranks)
        alt_roles, voter_roles = tuple(alts), tuple(voters)
    return ReducedInstance(
        rule=RuleKind.CC,
        graph=graph,
        params=params,
        k=k,
        beta=beta,
        L=None,
        profile=profile,
        alt_roles=alt_roles,
        voter_roles=voter_roles,
        trivially_no=trivially_no,
    )


def monroe_reduction(
    graph: Graph, h: int | None = None, params: ReductionParams | None = None
) -> ReducedInstance:
    """Clique instance -> Monroe budget instance.

    Every used alternative must represent exactly L = s1 + s2*(h-1)
    voters, arranged by adding filler alternatives x_z / y_z with their
    own voters so that the voter count is exactly L * k.
    """
    params = _resolve_h(h, params)
    h, s1, s2 = params.h, params.s1, params.s2_effective
    nhat, mhat = graph.n_vertices, graph.n_edges
    ch2 = math.comb(h, 2)
    L = s1 + s2 * (h - 1)
    nx = s2
    ny = L - 2 * s2
    if ny < 0:
        raise ValueError(f"s1={s1}, s2={s2}, h={h} give a negative filler count |Y|={ny}")
    fill_x = L - h * (h - 1)
    fill_y = L - ch2
    if fill_x < 0 or fill_y < 0:
        raise ValueError(
            f"s1={s1}, s2={s2}, h={h} give negative filler voter counts ({fill_x}, {fill_y})"
        )
    k = mhat + nhat - ch2 + s1 + s2 * (h - 2)
    beta = s1 * h + 2 * ch2 * s2 + ch2 * L
    trivially_no = nhat < h or mhat < ch2

    profile = None
    alt_roles: tuple[GadgetRole, ...] = ()
    voter_roles: tuple[GadgetRole, ...] = ()
    if k >= 1 and nhat >= 1 and mhat >= 1:
        _scale_check(params, beta, nhat, mhat)
        sizes = _blocker_sizes(params, beta, nhat, mhat)
        lay = _Layout(nhat, mhat, sizes, monroe=True, nx=nx, ny=ny)
        roles, prefixes = _base_voters(graph, params, lay)
        for i in range(nhat):
            ahat = [lay.Ahat(i, t) for t in range(sizes["Ahat"])]
            for z in range(nx):
                pre = [lay.d(i), lay.x(z)] + ahat
                for r in range(h - 1):
                    roles.append(GadgetRole("vhat", (i, z, r)))
                    prefixes.append(pre)
        for j in range(mhat):
            bhat = [lay.Bhat(j, t) for t in range(sizes["Bhat"])]
            for z in range(ny):
                roles.append(GadgetRole("what", (j, z)))
                prefixes.append([lay.e(j), lay.y(z)] + bhat)
        for z in range(nx):
            pre = [lay.x(z)] + [lay.Fx(z, t) for t in range(sizes["F"])]
            for r in range(fill_x):
                roles.append(GadgetRole("vhat0", (z, r)))
                prefixes.append(pre)
        for z in range(ny):
            pre = [lay.y(z)] + [lay.Fy(z, t) for t in range(sizes["F"])]
            for r in range(fill_y):
                roles.append(GadgetRole("what0", (z, r)))
                prefixes.append(pre)
        ranks = _rows_from_prefixes(lay.m, prefixes)
        profile = PreferenceProfile(ranks)
        alt_roles, voter_roles = tuple(lay.alt_roles()), tuple(roles)
        if len(roles) != L * k:
            raise RuntimeError(
                f"construction bug: {len(roles)} voters but L*k = {L}*{k} = {L * k}"
            )
    return ReducedInstance(
        rule=RuleKind.MONROE,
        graph=graph,
        params=params,
        k=k,
        beta=beta,
        L=L,
        profile=profile,
        alt_roles=alt_roles,
        voter_roles=voter_roles,
        trivially_no=trivially_no,
    )


def _check_clique(graph: Graph, h: int, clique) -> frozenset:
    members = frozenset(int(v) for v in clique)
    if len(members) != h:
        raise ValueError(f"clique must have {h} distinct vertices, got {sorted(members)}")
    if any(v < 0 or v >= graph.n_vertices for v in members):
        raise ValueError(f"clique {sorted(members)} has out-of-range vertices")
    adj = graph.adjacency()
    for a, b in itertools.combinations(sorted(members), 2):
        if not adj[a, b]:
            raise ValueError(f"clique invalid: ({a}, {b}) is not an edge")
    return members


def cc_witness(graph: Graph, h: int, clique, inst: ReducedInstance) -> np.ndarray:
    """The assignment that prices an h-clique at exactly beta under CC.

    Clique vertex voters move to their vertex alternative (rank 1),
    other vertex voters keep their dummy (rank 0).  Edge voters of
    clique-induced edges move to their own endpoint (rank 1), the rest
    keep their edge alternative (rank 0).
    """
    if inst.rule is not RuleKind.CC or inst.profile is None:
        raise ValueError("cc_witness needs a generated CC instance")
    members = _check_clique(graph, h, clique)
    clique_edges = {
        j for j, (a, b) in enumerate(graph.edges) if a in members and b in members
    }
    assignment = np.empty(inst.n_voters, dtype=np.int64)
    for vid, role in enumerate(inst.voter_roles):
        if role.kind == "v":
            i = role.fields[0]
            label = f"u:{i}" if i in members else f"d:{i}"
        elif role.kind == "w":
            j, endpoint = role.fields[0], role.fields[1]
            label = f"u:{endpoint}" if j in clique_edges else f"e:{j}"
        else:
            raise RuntimeError(f"unexpected voter role {role.label} in CC instance")
        assignment[vid] = inst.alternative(label)
    _assert_witness(inst, assignment, usage_exact=None)
    return assignment


def monroe_witness(graph: Graph, h: int, clique, inst: ReducedInstance) -> np.ndarray:
    """The assignment that prices an h-clique at exactly beta under Monroe.

    On top of the CC moves, filler voters route to x_z / y_z (for
    clique vertices and clique edges) or stay with the dummy / edge
    alternative (for the rest), so every used alternative represents
    exactly L voters.
    """
    if inst.rule is not RuleKind.MONROE or inst.profile is None:
        raise ValueError("monroe_witness needs a generated Monroe instance")
    members = _check_clique(graph, h, clique)
    clique_edges = {
        j for j, (a, b) in enumerate(graph.edges) if a in members and b in members
    }
    assignment = np.empty(inst.n_voters, dtype=np.int64)
    for vid, role in enumerate(inst.voter_roles):
        kind = role.kind
        if kind == "v":
            i = role.fields[0]
            label = f"u:{i}" if i in members else f"d:{i}"
        elif kind == "w":
            j, endpoint = role.fields[0], role.fields[1]
            label = f"u:{endpoint}" if j in clique_edges else f"e:{j}"
        elif kind == "vhat":
            i, z = role.fields[0], role.fields[1]
            label = f"x:{z}" if i in members else f"d:{i}"
        elif kind == "what":
            j, z = role.fields[0], role.fields[1]
            label = f"y:{z}" if j in clique_edges else f"e:{j}"
        elif kind == "vhat0":
            label = f"x:{role.fields[0]}"
        elif kind == "what0":
            label = f"y:{role.fields[0]}"
        else:
            raise RuntimeError(f"unexpected voter role {role.label} in Monroe instance")
        assignment[vid] = inst.alternative(label)
    _assert_witness(inst, assignment, usage_exact=inst.L)
    return assignment


def _assert_witness(inst: ReducedInstance, assignment: np.ndarray, usage_exact: int | None):
    """Hard construction checks: witness must hit beta exactly with a
    committee of exactly k used alternatives (and uniform usage for
    Monroe)."""
    cost = misrepresentation_sum(inst.profile, assignment)
    used = np.unique(assignment)
    if cost != inst.beta or used.size != inst.k:
        raise RuntimeError(
            f"construction bug: witness cost {cost} (beta {inst.beta}), "
            f"image size {used.size} (k {inst.k})"
        )
    if usage_exact is not None:
        counts = np.bincount(assignment, minlength=inst.n_alternatives)
        bad = counts[used] != usage_exact
        if bad.any():
            raise RuntimeError(
                f"construction bug: usage counts {sorted(set(counts[used]))} != L = {usage_exact}"
            )
    report = validate_assignment(inst.profile, assignment, inst.k, inst.rule)
    if not report.valid:
        raise RuntimeError(f"construction bug: witness invalid: {report.violations}")


def instance_stats(inst: ReducedInstance) -> dict:
    """Counts record with hard identity checks.

    Raises RuntimeError when generated counts contradict the closed
    forms (that would be a construction bug, not bad input).
    """
    params = inst.params
    s1, s2, h = params.s1, params.s2_effective, params.h
    nhat, mhat = inst.graph.n_vertices, inst.graph.n_edges
    role_counts: dict[str, int] = {}
    for role in inst.alt_roles:
        role_counts[role.kind] = role_counts.get(role.kind, 0) + 1
    voter_counts: dict[str, int] = {}
    for role in inst.voter_roles:
        voter_counts[role.kind] = voter_counts.get(role.kind, 0) + 1
    stats = {
        "rule": inst.rule.value,
        "n_alternatives": inst.n_alternatives,
        "n_voters": inst.n_voters,
        "k": inst.k,
        "beta": inst.beta,
        "L": inst.L,
        "graph_vertices": nhat,
        "graph_edges": mhat,
        "alternative_roles": role_counts,
        "voter_roles": voter_counts,
        "trivially_no": inst.trivially_no,
    }
    if inst.profile is None:
        return stats
    if inst.rule is RuleKind.CC:
        expected_n = s1 * nhat + 2 * s2 * mhat
        if inst.n_voters != expected_n:
            raise RuntimeError(
                f"construction bug: CC voter count {inst.n_voters} != s1*n + 2*s2*m = {expected_n}"
            )
    else:
        if inst.n_voters != inst.L * inst.k:
            raise RuntimeError(
                f"construction bug: Monroe voter count {inst.n_voters} != L*k = {inst.L * inst.k}"
            )
        nx = role_counts.get("x", 0)
        ny = role_counts.get("y", 0)
        if 2 * nx + ny != inst.L:
            raise RuntimeError(
                f"construction bug: 2|X| + |Y| = {2 * nx + ny} != L = {inst.L}"
            )
    return stats


def instance_metadata(inst: ReducedInstance) -> dict:
    """Sidecar metadata: parameters plus the full id -> role-label maps."""
    params = inst.params
    blocker: dict = {"mode": params.blocker_mode}
    if params.blocker_mode == BLOCKER_COMPACT:
        blocker["size"] = (
            params.blocker_size if params.blocker_size is not None else inst.beta + 1
        )
    meta = {
        "rule": inst.rule.value,
        "h": params.h,
        "s1": params.s1,
        "s2": params.s2_effective,
        "k": inst.k,
        "beta": inst.beta,
        "blocker_mode": blocker,
        "trivially_no": inst.trivially_no,
        "roles": {
            "alternatives": {str(i): r.label for i, r in enumerate(inst.alt_roles)},
            "voters": {str(i): r.label for i, r in enumerate(inst.voter_roles)},
        },
    }
    if inst.L is not None:
        meta["L"] = inst.L
    return meta


def metadata_json(inst: ReducedInstance) -> str:
    return json.dumps(instance_metadata(inst), sort_keys=True, indent=2) + "\n"
