"""End-to-end command line checks, run in-process through dispatch()."""

import json

import pytest

from ccmonroe import Graph, parse_profile, serialize_graph
from ccmonroe.cli import dispatch

K3 = Graph(3, ((0, 1), (0, 2), (1, 2)))
P4 = Graph(4, ((0, 1), (1, 2), (2, 3)))
G69 = Graph(6, ((0, 1), (0, 2), (1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 5), (0, 5)))

SMALL_PROFILE = "m 3\nn 4\n0 1 2\n0 1 2\n1 2 0\n2 1 0\n"


@pytest.fixture
def k3_path(tmp_path):
    p = tmp_path / "k3.graph"
    p.write_text(serialize_graph(K3))
    return str(p)


@pytest.fixture
def p4_path(tmp_path):
    p = tmp_path / "p4.graph"
    p.write_text(serialize_graph(P4))
    return str(p)


@pytest.fixture
def profile_path(tmp_path):
    p = tmp_path / "small.profile"
    p.write_text(SMALL_PROFILE)
    return str(p)


# ---------------------------------------------------------------------------
# gen-reduction


def test_gen_reduction_cc(tmp_path, k3_path, capsys):
    out = tmp_path / "gadget.profile"
    meta = tmp_path / "gadget.json"
    code = dispatch(
        [
            "gen-reduction",
            "--rule",
            "cc",
            "--graph",
            k3_path,
            "--h",
            "3",
            "--out",
            str(out),
            "--meta",
            str(meta),
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "rule=cc m=141 n=21 k=3 beta=21\n"
    prof = parse_profile(out.read_text())
    assert (prof.n_alternatives, prof.n_voters) == (141, 21)
    meta_obj = json.loads(meta.read_text())
    assert meta_obj["rule"] == "cc" and meta_obj["beta"] == 21


def test_gen_reduction_monroe(tmp_path, k3_path, capsys):
    out = tmp_path / "gadget.profile"
    code = dispatch(
        ["gen-reduction", "--rule", "monroe", "--graph", k3_path, "--h", "3", "--out", str(out)]
    )
    assert code == 0
    assert capsys.readouterr().out == "rule=monroe m=701 n=49 k=7 beta=42 L=7\n"


def test_gen_reduction_trivially_no(tmp_path, capsys):
    g = tmp_path / "sparse.graph"
    g.write_text(serialize_graph(Graph(4, ((0, 1),))))
    out = tmp_path / "x.profile"
    code = dispatch(
        ["gen-reduction", "--rule", "cc", "--graph", str(g), "--h", "3", "--out", str(out)]
    )
    assert code == 0
    assert capsys.readouterr().out.rstrip().endswith("trivially_no=true")
    assert out.exists()


def test_gen_reduction_graph_too_small(tmp_path, capsys):
    g = tmp_path / "empty.graph"
    g.write_text("p 2 0\n")
    out = tmp_path / "x.profile"
    code = dispatch(
        ["gen-reduction", "--rule", "cc", "--graph", str(g), "--h", "3", "--out", str(out)]
    )
    assert code == 64
    assert "too small" in capsys.readouterr().err
    assert not out.exists()


def test_gen_reduction_unwritable_out(k3_path, capsys):
    code = dispatch(
        [
            "gen-reduction",
            "--rule",
            "cc",
            "--graph",
            k3_path,
            "--h",
            "3",
            "--out",
            "/no/such/dir/profile.txt",
        ]
    )
    assert code == 74
    assert "cannot write" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# solve and eval


def test_solve_exact_small(profile_path, capsys):
    code = dispatch(["solve", "--rule", "cc", "--profile", profile_path, "--k", "1"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["status"] == "optimal"
    assert obj["committee"] == [1] and obj["cost"] == 3


def test_solve_budget_decides_both_ways(profile_path, capsys):
    code = dispatch(
        ["solve", "--rule", "cc", "--profile", profile_path, "--k", "1", "--budget", "3"]
    )
    assert code == 0
    assert json.loads(capsys.readouterr().out)["status"] == "feasible"
    code = dispatch(
        ["solve", "--rule", "cc", "--profile", profile_path, "--k", "1", "--budget", "2"]
    )
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["status"] == "infeasible" and "cost" not in obj


def test_solve_time_cap_inconclusive(tmp_path, k3_path, capsys):
    prof = tmp_path / "gadget.profile"
    assert (
        dispatch(
            ["gen-reduction", "--rule", "cc", "--graph", k3_path, "--h", "3", "--out", str(prof)]
        )
        == 0
    )
    capsys.readouterr()
    code = dispatch(
        [
            "solve",
            "--rule",
            "cc",
            "--profile",
            str(prof),
            "--k",
            "3",
            "--time-cap",
            "0.0001",
        ]
    )
    assert code == 3
    assert json.loads(capsys.readouterr().out)["status"] == "inconclusive"


def test_solve_then_eval_round_trip(tmp_path, profile_path, capsys):
    sol = tmp_path / "sol.json"
    assert (
        dispatch(
            [
                "solve",
                "--rule",
                "monroe",
                "--profile",
                profile_path,
                "--k",
                "2",
                "--out",
                str(sol),
            ]
        )
        == 0
    )
    capsys.readouterr()
    code = dispatch(
        ["eval", "--rule", "monroe", "--profile", profile_path, "--assignment", str(sol)]
    )
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["ok"] and obj["cost_matches"] and obj["valid"] and obj["committee_matches"]


def test_eval_detects_tampered_cost(tmp_path, profile_path, capsys):
    sol = tmp_path / "sol.json"
    dispatch(
        ["solve", "--rule", "cc", "--profile", profile_path, "--k", "1", "--out", str(sol)]
    )
    obj = json.loads(sol.read_text())
    obj["cost"] += 1
    sol.write_text(json.dumps(obj))
    capsys.readouterr()
    code = dispatch(["eval", "--rule", "cc", "--profile", profile_path, "--assignment", str(sol)])
    assert code == 1
    out = json.loads(capsys.readouterr().out)
    assert out["ok"] is False and out["cost_matches"] is False


def test_eval_detects_broken_quota(tmp_path, profile_path, capsys):
    sol = tmp_path / "sol.json"
    dispatch(
        ["solve", "--rule", "monroe", "--profile", profile_path, "--k", "2", "--out", str(sol)]
    )
    obj = json.loads(sol.read_text())
    # pile every voter onto one alternative: Monroe quotas break
    target = obj["committee"][0]
    obj["assignment"] = {v: target for v in obj["assignment"]}
    sol.write_text(json.dumps({k: obj[k] for k in ("status", "nodes", "cost", "committee", "assignment")}))
    capsys.readouterr()
    code = dispatch(
        ["eval", "--rule", "monroe", "--profile", profile_path, "--assignment", str(sol)]
    )
    assert code == 1


def test_eval_rejects_outcome_without_assignment(tmp_path, profile_path, capsys):
    sol = tmp_path / "sol.json"
    sol.write_text(json.dumps({"status": "infeasible", "nodes": 12}))
    code = dispatch(["eval", "--rule", "cc", "--profile", profile_path, "--assignment", str(sol)])
    assert code == 74
    assert "no assignment" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# witness and clique


def test_witness_cc(tmp_path, k3_path, capsys):
    out = tmp_path / "w.json"
    code = dispatch(
        [
            "witness",
            "--rule",
            "cc",
            "--graph",
            k3_path,
            "--h",
            "3",
            "--clique",
            "0,1,2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "cost=21 beta=21 k=3 committee_size=3\n"
    stored = json.loads(out.read_text())
    assert stored["cost"] == 21 and stored["k"] == 3


def test_witness_feeds_eval(tmp_path, k3_path, capsys):
    prof = tmp_path / "gadget.profile"
    w = tmp_path / "w.json"
    dispatch(
        ["gen-reduction", "--rule", "monroe", "--graph", k3_path, "--h", "3", "--out", str(prof)]
    )
    capsys.readouterr()
    code = dispatch(
        [
            "witness",
            "--rule",
            "monroe",
            "--graph",
            k3_path,
            "--h",
            "3",
            "--clique",
            "0,1,2",
            "--out",
            str(w),
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "cost=42 beta=42 k=7 committee_size=7\n"
    code = dispatch(
        ["eval", "--rule", "monroe", "--profile", str(prof), "--assignment", str(w)]
    )
    assert code == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True


def test_witness_invalid_clique(p4_path, capsys):
    code = dispatch(
        ["witness", "--rule", "cc", "--graph", p4_path, "--h", "3", "--clique", "0,1,2"]
    )
    assert code == 64
    assert "not an edge" in capsys.readouterr().err


def test_witness_malformed_clique(k3_path, capsys):
    code = dispatch(
        ["witness", "--rule", "cc", "--graph", k3_path, "--h", "3", "--clique", "0;1;2"]
    )
    assert code == 64


def test_clique_found_and_missing(k3_path, p4_path, capsys):
    assert dispatch(["clique", "--graph", k3_path, "--h", "3"]) == 0
    assert capsys.readouterr().out == "clique=0,1,2\n"
    assert dispatch(["clique", "--graph", p4_path, "--h", "3"]) == 0
    assert capsys.readouterr().out == "clique=none\n"


# ---------------------------------------------------------------------------
# verify and batch-verify


def test_verify_agree(p4_path, capsys):
    code = dispatch(["verify", "--rule", "cc", "--graph", p4_path, "--h", "3"])
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["status"] == "agree" and obj["graph_id"] == "p4"
    assert obj["clique_found"] is False and obj["budget_feasible"] is False
    assert "duration_s" not in obj


def test_verify_monroe_with_timings(tmp_path, capsys):
    g = tmp_path / "g69.graph"
    g.write_text(serialize_graph(G69))
    code = dispatch(
        ["verify", "--rule", "monroe", "--graph", str(g), "--h", "3", "--timings"]
    )
    assert code == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["cost"] == 42 and obj["claim2_ok"] is True
    assert obj["duration_s"] > 0


def test_verify_inconclusive_exit(tmp_path, capsys):
    g = tmp_path / "g69.graph"
    g.write_text(serialize_graph(G69))
    code = dispatch(
        [
            "verify",
            "--rule",
            "monroe",
            "--graph",
            str(g),
            "--h",
            "3",
            "--time-cap",
            "0.0001",
        ]
    )
    assert code == 3
    assert json.loads(capsys.readouterr().out)["status"] == "inconclusive"


def test_batch_verify_family(tmp_path, capsys):
    out = tmp_path / "report.json"
    argv = [
        "batch-verify",
        "--rule",
        "cc",
        "--graph",
        "exhaustive:3",
        "--h",
        "3",
        "--out",
        str(out),
    ]
    assert dispatch(argv) == 0
    table = capsys.readouterr().out
    assert table.strip().split("\n")[-1] == (
        "total 8  agree 8  disagree 0  inconclusive 0  error 0"
    )
    first = out.read_bytes()
    assert dispatch(argv) == 0
    capsys.readouterr()
    assert out.read_bytes() == first  # byte-identical rerun


def test_batch_verify_jobs_parity(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    base = ["batch-verify", "--rule", "cc", "--graph", "exhaustive:3", "--h", "3"]
    assert dispatch(base + ["--out", str(out1)]) == 0
    assert dispatch(base + ["--jobs", "2", "--out", str(out2)]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_batch_verify_directory_with_broken_file(tmp_path, capsys):
    d = tmp_path / "graphs"
    d.mkdir()
    (d / "ok.graph").write_text(serialize_graph(P4))
    (d / "bad.graph").write_text("e 1\n")
    code = dispatch(["batch-verify", "--rule", "cc", "--graph", str(d), "--h", "3"])
    assert code == 3
    assert "error" in capsys.readouterr().out


def test_batch_verify_usage_errors(capsys):
    assert dispatch(["batch-verify", "--rule", "cc", "--graph", "spiral:4", "--h", "3"]) == 64
    assert dispatch(["batch-verify", "--rule", "cc", "--graph", "/no/such/dir", "--h", "3"]) == 64
    capsys.readouterr()


# ---------------------------------------------------------------------------
# Usage and I/O error rims


def test_usage_errors_exit_64(profile_path, k3_path, capsys):
    cases = [
        ["solve", "--rule", "cc", "--profile", profile_path],  # missing --k
        ["solve", "--rule", "borda", "--profile", profile_path, "--k", "1"],
        ["frobnicate"],
        ["clique", "--graph", k3_path, "--h", "3", "--laser"],
        ["witness", "--rule", "cc", "--graph", k3_path, "--h", "3", "--clique", "0,1,2", "--blocker-size", "tiny"],
        ["solve", "--rule", "cc", "--profile", profile_path, "--k", "1", "--time-cap", "0"],
        ["solve", "--rule", "cc", "--profile", profile_path, "--k", "0"],
        [],
    ]
    for argv in cases:
        assert dispatch(argv) == 64, argv
        capsys.readouterr()


def test_io_errors_exit_74(tmp_path, capsys):
    bad_profile = tmp_path / "bad.profile"
    bad_profile.write_text("m 3\nn 1\n0 0 1\n")
    cases = [
        ["clique", "--graph", str(tmp_path / "missing.graph"), "--h", "3"],
        ["solve", "--rule", "cc", "--profile", str(bad_profile), "--k", "1"],
        ["eval", "--rule", "cc", "--profile", str(bad_profile), "--assignment", str(bad_profile)],
    ]
    for argv in cases:
        assert dispatch(argv) == 74, argv
        capsys.readouterr()


def test_help_exits_zero(capsys):
    assert dispatch(["--help"]) == 0
    assert dispatch(["solve", "--help"]) == 0
    out = capsys.readouterr().out
    assert "--budget" in out
