"""Exact Chamberlin-Courant and Monroe committee toolkit.

Three layers: preference profiles with exact assignment evaluation
(`profiles`, `engine`), branch-and-bound committee solvers with
budget decisions (`solvers`), and clique-gadget generators plus an
equivalence harness that checks, graph by graph, that an h-clique
exists exactly when the generated instance admits a committee within
budget (`reduction`, `harness`).

Hot numeric kernels are numba-compiled with a pure numpy twin;
set CCMONROE_BACKEND=numpy or numba to pick one explicitly.
"""

from ._kernels import active_backend, set_backend
from .engine import (
    AssignmentResult,
    InfeasibleCommitteeError,
    QuotaInterval,
    assignment_from_json,
    assignment_to_json,
    brute_force_assignment,
    free_cc_cost,
    optimal_assignment_for_committee,
    quota_interval,
)
from .harness import (
    BatchReport,
    VerdictReport,
    batch_report_json,
    batch_report_table,
    batch_verify,
    canonical_form,
    check_claim1,
    check_claim2,
    enumerate_graphs,
    family_graphs,
    verify_equivalence,
)
from .profiles import (
    PreferenceProfile,
    ProfileFormatError,
    RuleKind,
    ValidationReport,
    build_profile,
    misrepresentation_sum,
    parse_profile,
    rank_of,
    serialize_profile,
    validate_assignment,
)
from .reduction import (
    Graph,
    GraphFormatError,
    GadgetRole,
    ReducedInstance,
    ReductionParams,
    StrictScaleError,
    base_construction,
    cc_reduction,
    cc_witness,
    find_clique,
    has_triangle,
    instance_metadata,
    instance_stats,
    metadata_json,
    monroe_reduction,
    monroe_witness,
    parse_graph,
    serialize_graph,
)
from .solvers import (
    SolveOutcome,
    SolveStatus,
    brute_force_solve,
    candidate_filter,
    decide_budget,
    outcome_to_json,
    solve_exact,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentResult",
    "BatchReport",
    "Graph",
    "GadgetRole",
    "GraphFormatError",
    "InfeasibleCommitteeError",
    "PreferenceProfile",
    "ProfileFormatError",
    "QuotaInterval",
    "ReducedInstance",
    "ReductionParams",
    "RuleKind",
    "SolveOutcome",
    "SolveStatus",
    "StrictScaleError",
    "ValidationReport",
    "VerdictReport",
    "active_backend",
    "assignment_from_json",
    "assignment_to_json",
    "base_construction",
    "batch_report_json",
    "batch_report_table",
    "batch_verify",
    "brute_force_assignment",
    "brute_force_solve",
    "build_profile",
    "candidate_filter",
    "canonical_form",
    "cc_reduction",
    "cc_witness",
    "check_claim1",
    "check_claim2",
    "decide_budget",
    "enumerate_graphs",
    "family_graphs",
    "find_clique",
    "free_cc_cost",
    "has_triangle",
    "instance_metadata",
    "instance_stats",
    "metadata_json",
    "misrepresentation_sum",
    "monroe_reduction",
    "monroe_witness",
    "optimal_assignment_for_committee",
    "outcome_to_json",
    "parse_graph",
    "parse_profile",
    "quota_interval",
    "rank_of",
    "serialize_graph",
    "serialize_profile",
    "set_backend",
    "solve_exact",
    "validate_assignment",
    "verify_equivalence",
    "__version__",
]
