"""Command line front end.

Subcommands: gen-reduction (graph -> gadget profile), solve (exact or
budgeted committee solve on a profile), eval (recompute cost and
validity of a stored assignment), witness (forward assignment from a
known clique), clique (brute-force clique search), verify (clique
oracle vs budget solver on one graph), batch-verify (the same over a
directory of graph files or a generated family).

Exit codes: 0 success, 1 a failed eval check, 2 any verification
disagreement, 3 inconclusive or unreadable items without a
disagreement, 64 usage errors, 74 I/O errors.

Every output is deterministic for fixed inputs and seeds.  Files are
written atomically (temp file in the target directory, then rename).
``--time-cap SECONDS`` converts to a search node budget at a fixed
calibration rate of 20000 nodes per second, so capped runs are
reproducible instead of racing a wall clock; a capped-out solve
reports status "inconclusive" and exits 3.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
import tempfile
from pathlib import Path

from .engine import AssignmentResult, assignment_from_json, assignment_to_json
from .harness import (
    STATUS_AGREE,
    STATUS_DISAGREE,
    batch_report_json,
    batch_report_table,
    batch_verify,
    verify_equivalence,
)
from .profiles import (
    ProfileFormatError,
    RuleKind,
    misrepresentation_sum,
    parse_profile,
    serialize_profile,
    validate_assignment,
)
from .reduction import (
    BLOCKER_COMPACT,
    BLOCKER_PAPER,
    Graph,
    GraphFormatError,
    ReductionParams,
    cc_reduction,
    cc_witness,
    find_clique,
    metadata_json,
    monroe_reduction,
    monroe_witness,
    parse_graph,
)
from .solvers import DEFAULT_NODE_CAP, SolveStatus, decide_budget, outcome_to_json, solve_exact

EX_OK = 0
EX_CHECK_FAILED = 1
EX_DISAGREE = 2
EX_INCONCLUSIVE = 3
EX_USAGE = 64
EX_IOERR = 74

NODES_PER_SECOND = 20000


class CliError(Exception):
    """Carries an exit code and a message for the main() rim."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage errors exit 64 instead of 2."""

    def error(self, message):
        raise CliError(EX_USAGE, f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# Shared plumbing


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(EX_IOERR, f"cannot read {path}: {exc}") from exc


def _atomic_write(path: str, text: str) -> None:
    """Write text to path via a same-directory temp file plus rename."""
    target = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=str(target.parent), prefix=f".{target.name}.")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except BaseException:
            with contextlib.suppress(OSError):
                os.unlink(tmp)
            raise
    except OSError as exc:
        raise CliError(EX_IOERR, f"cannot write {path}: {exc}") from exc


def _load_graph(path: str) -> Graph:
    text = _read_text(path)
    try:
        return parse_graph(text)
    except GraphFormatError as exc:
        raise CliError(EX_IOERR, f"{path}: {exc}") from exc


def _load_profile(path: str):
    text = _read_text(path)
    try:
        return parse_profile(text)
    except ProfileFormatError as exc:
        raise CliError(EX_IOERR, f"{path}: {exc}") from exc


def _rule(ns) -> RuleKind:
    return RuleKind.parse(ns.rule)


def _params(ns) -> ReductionParams:
    mode, size = BLOCKER_COMPACT, None
    raw = getattr(ns, "blocker_size", None)
    if raw is not None:
        if raw == "paper":
            mode = BLOCKER_PAPER
        else:
            try:
                size = int(raw)
            except ValueError:
                raise CliError(
                    EX_USAGE, f"--blocker-size expects an integer or 'paper', got {raw!r}"
                ) from None
    try:
        return ReductionParams(
            h=ns.h, blocker_mode=mode, blocker_size=size, strict=getattr(ns, "strict", False)
        )
    except ValueError as exc:
        raise CliError(EX_USAGE, str(exc)) from exc


def _node_cap(ns) -> int:
    cap = DEFAULT_NODE_CAP
    seconds = getattr(ns, "time_cap", None)
    if seconds is not None:
        if seconds <= 0:
            raise CliError(EX_USAGE, "--time-cap must be positive")
        cap = min(cap, max(1, int(seconds * NODES_PER_SECOND)))
    return cap


def _reduce(rule: RuleKind, graph: Graph, params: ReductionParams):
    builder = cc_reduction if rule is RuleKind.CC else monroe_reduction
    try:
        return builder(graph, params=params)
    except ValueError as exc:
        raise CliError(EX_USAGE, str(exc)) from exc


def _parse_clique(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise CliError(EX_USAGE, f"--clique expects v1,v2,... got {text!r}") from None


def _load_assignment(path: str, rule: RuleKind) -> AssignmentResult:
    """Read an assignment file in either stored shape.

    Accepts the engine's assignment JSON ({"k", "cost", "committee",
    "assignment"}) and the solver outcome JSON ({"status", "nodes",
    ...same fields...}), so `solve --out` files feed straight into
    `eval`.
    """
    text = _read_text(path)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EX_IOERR, f"{path}: {exc}") from exc
    if isinstance(obj, dict) and "status" in obj:
        if "assignment" not in obj:
            raise CliError(
                EX_IOERR,
                f"{path}: outcome with status {obj['status']!r} carries no assignment",
            )
        obj = {
            "k": len(obj["committee"]),
            "cost": obj["cost"],
            "committee": obj["committee"],
            "assignment": obj["assignment"],
        }
        text = json.dumps(obj)
    try:
        return assignment_from_json(text, rule)
    except ValueError as exc:
        raise CliError(EX_IOERR, f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_gen_reduction(ns) -> int:
    rule = _rule(ns)
    graph = _load_graph(ns.graph)
    inst = _reduce(rule, graph, _params(ns))
    if inst.profile is None:
        raise CliError(EX_USAGE, "graph too small: the reduction yields no voters (k < 1)")
    _atomic_write(ns.out, serialize_profile(inst.profile))
    if ns.meta:
        _atomic_write(ns.meta, metadata_json(inst))
    line = (
        f"rule={rule.value} m={inst.n_alternatives} n={inst.n_voters}"
        f" k={inst.k} beta={inst.beta}"
    )
    if inst.L is not None:
        line += f" L={inst.L}"
    if inst.trivially_no:
        line += " trivially_no=true"
    print(line)
    return EX_OK


def _cmd_solve(ns) -> int:
    rule = _rule(ns)
    profile = _load_profile(ns.profile)
    cap = _node_cap(ns)
    try:
        if ns.budget is not None:
            outcome = decide_budget(profile, ns.k, rule, ns.budget, node_cap=cap)
        else:
            outcome = solve_exact(profile, ns.k, rule, node_cap=cap)
    except ValueError as exc:
        raise CliError(EX_USAGE, str(exc)) from exc
    text = outcome_to_json(outcome)
    sys.stdout.write(text)
    if ns.out:
        _atomic_write(ns.out, text)
    return EX_INCONCLUSIVE if outcome.status is SolveStatus.INCONCLUSIVE else EX_OK


def _cmd_eval(ns) -> int:
    """Recompute cost and validity of a stored assignment, independently."""
    rule = _rule(ns)
    profile = _load_profile(ns.profile)
    stored = _load_assignment(ns.assignment, rule)
    k = ns.k if ns.k is not None else len(stored.committee)
    try:
        cost = misrepresentation_sum(profile, stored.assignment)
        report = validate_assignment(profile, stored.assignment, k, rule)
    except ValueError as exc:
        obj = {"ok": False, "error": str(exc)}
        sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")
        return EX_CHECK_FAILED
    committee_matches = set(report.usage) == set(stored.committee)
    ok = report.valid and committee_matches and cost == stored.cost
    obj = {
        "ok": ok,
        "cost": cost,
        "recorded_cost": stored.cost,
        "cost_matches": cost == stored.cost,
        "valid": report.valid,
        "committee_matches": committee_matches,
        "k": k,
        "used": report.used_count,
        "violations": report.violations,
    }
    out = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(out)
    if ns.out:
        _atomic_write(ns.out, out)
    return EX_OK if ok else EX_CHECK_FAILED


def _cmd_witness(ns) -> int:
    rule = _rule(ns)
    graph = _load_graph(ns.graph)
    params = _params(ns)
    inst = _reduce(rule, graph, params)
    if inst.profile is None:
        raise CliError(EX_USAGE, "graph too small: the reduction yields no voters (k < 1)")
    clique = _parse_clique(ns.clique)
    builder = cc_witness if rule is RuleKind.CC else monroe_witness
    try:
        assignment = builder(graph, params.h, clique, inst)
    except ValueError as exc:
        raise CliError(EX_USAGE, str(exc)) from exc
    cost = misrepresentation_sum(inst.profile, assignment)
    committee = tuple(sorted({int(a) for a in assignment}))
    result = AssignmentResult(assignment=assignment, cost=cost, committee=committee, rule=rule)
    print(f"cost={cost} beta={inst.beta} k={inst.k} committee_size={len(committee)}")
    if ns.out:
        _atomic_write(ns.out, assignment_to_json(result))
    return EX_OK


def _cmd_clique(ns) -> int:
    graph = _load_graph(ns.graph)
    try:
        found = find_clique(graph, ns.h)
    except ValueError as exc:
        raise CliError(EX_USAGE, str(exc)) from exc
    print("clique=none" if found is None else "clique=" + ",".join(map(str, found)))
    return EX_OK


def _cmd_verify(ns) -> int:
    rule = _rule(ns)
    graph = _load_graph(ns.graph)
    report = verify_equivalence(
        graph,
        None,
        rule,
        _params(ns),
        node_cap=_node_cap(ns),
        include_timings=ns.timings,
        graph_id=Path(ns.graph).stem,
    )
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    sys.stdout.write(text)
    if ns.out:
        _atomic_write(ns.out, text)
    if report.status == STATUS_AGREE:
        return EX_OK
    if report.status == STATUS_DISAGREE:
        return EX_DISAGREE
    return EX_INCONCLUSIVE


def _cmd_batch_verify(ns) -> int:
    rule = _rule(ns)
    params = _params(ns)
    try:
        report = batch_verify(
            ns.graph,
            None,
            rule,
            params,
            jobs=ns.jobs,
            node_cap=_node_cap(ns),
            include_timings=ns.timings,
            seed=ns.seed,
        )
    except (NotADirectoryError, ValueError) as exc:
        raise CliError(EX_USAGE, str(exc)) from exc
    sys.stdout.write(batch_report_table(report))
    if ns.out:
        _atomic_write(ns.out, batch_report_json(report))
    return report.exit_code


# ---------------------------------------------------------------------------
# Parser


def _add_rule(p: _Parser) -> None:
    p.add_argument("--rule", required=True, choices=("cc", "monroe"))


def _add_blockers(p: _Parser) -> None:
    p.add_argument(
        "--blocker-size",
        default=None,
        metavar="INT|paper",
        help="blocker family size (default beta+1), or 'paper' for the original sizes",
    )
    p.add_argument("--strict", action="store_true", help="refuse graphs below paper scale")


def _add_caps(p: _Parser) -> None:
    p.add_argument(
        "--time-cap",
        type=float,
        default=None,
        metavar="SECONDS",
        help=f"per-solve budget, converted to {NODES_PER_SECOND} search nodes per second",
    )


def build_parser() -> _Parser:
    top = _Parser(
        prog="ccmonroe",
        description="Exact Chamberlin-Courant and Monroe solvers with clique-gadget generators",
    )
    sub = top.add_subparsers(dest="command", metavar="SUBCOMMAND", required=True)

    p = sub.add_parser("gen-reduction", help="build a gadget profile from a graph")
    _add_rule(p)
    p.add_argument("--graph", required=True, metavar="PATH")
    p.add_argument("--h", required=True, type=int, help="clique size parameter")
    _add_blockers(p)
    p.add_argument("--out", required=True, metavar="PATH", help="profile output path")
    p.add_argument("--meta", default=None, metavar="PATH", help="role metadata JSON output path")
    p.set_defaults(func=_cmd_gen_reduction)

    p = sub.add_parser("solve", help="exact committee solve on a profile")
    _add_rule(p)
    p.add_argument("--profile", required=True, metavar="PATH")
    p.add_argument("--k", required=True, type=int, help="committee size")
    p.add_argument("--budget", type=int, default=None, help="decide cost <= budget instead")
    _add_caps(p)
    p.add_argument("--out", default=None, metavar="PATH")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("eval", help="recheck a stored assignment against a profile")
    _add_rule(p)
    p.add_argument("--profile", required=True, metavar="PATH")
    p.add_argument("--assignment", required=True, metavar="PATH")
    p.add_argument("--k", type=int, default=None, help="expected committee size")
    p.add_argument("--out", default=None, metavar="PATH")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("witness", help="forward witness assignment from a known clique")
    _add_rule(p)
    p.add_argument("--graph", required=True, metavar="PATH")
    p.add_argument("--h", required=True, type=int)
    p.add_argument("--clique", required=True, metavar="v1,v2,...")
    _add_blockers(p)
    p.add_argument("--out", default=None, metavar="PATH", help="assignment JSON output path")
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("clique", help="brute-force h-clique search on a graph")
    p.add_argument("--graph", required=True, metavar="PATH")
    p.add_argument("--h", required=True, type=int)
    p.set_defaults(func=_cmd_clique)

    p = sub.add_parser("verify", help="clique oracle vs budget solver on one graph")
    _add_rule(p)
    p.add_argument("--graph", required=True, metavar="PATH")
    p.add_argument("--h", required=True, type=int)
    _add_blockers(p)
    _add_caps(p)
    p.add_argument("--timings", action="store_true", help="include wall-clock durations")
    p.add_argument("--out", default=None, metavar="PATH")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("batch-verify", help="verify a directory or generated graph family")
    _add_rule(p)
    p.add_argument(
        "--graph",
        required=True,
        metavar="PATH|FAMILY",
        help=(
            "directory of graph files, or a descriptor: exhaustive:N[:min-edges=M],"
            " iso:N[:min-edges=M], random:N[:count=C][:p=F][:seed=S]"
        ),
    )
    p.add_argument("--h", required=True, type=int)
    _add_blockers(p)
    _add_caps(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--seed", type=int, default=0, help="fallback seed for random families")
    p.add_argument("--timings", action="store_true", help="include wall-clock durations")
    p.add_argument("--out", default=None, metavar="PATH", help="JSON report output path")
    p.set_defaults(func=_cmd_batch_verify)

    return top


def dispatch(argv=None) -> int:
    """Run one subcommand and return its exit code (never raises SystemExit)."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except CliError as exc:
        print(exc.message, file=sys.stderr)
        return exc.code
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return ns.func(ns)
    except CliError as exc:
        print(exc.message, file=sys.stderr)
        return exc.code


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
