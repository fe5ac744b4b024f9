import json
import subprocess
import sys

import pytest

from pa_mincsp.cli import main
from pa_mincsp.dispatch import HARDNESS_NOTICE, NON_FPT_NOTICE, dispatch_solve
from pa_mincsp.generate import gen_random_instance
from pa_mincsp.model import EQ, NEQ, make_instance, serialize_instance
from pa_mincsp.oracle import brute_force_mincsp


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# dispatch -------------------------------------------------------------------

def test_route_pipeline():
    res = dispatch_solve(make_instance([("x", "lt", "y"), ("y", "lt", "x"), ("x", "eq", "z")], 1))
    assert (res.status, res.route, res.solution.cost) == ("YES", "pipeline", 1)
    assert not res.notices


def test_route_lt_neq():
    res = dispatch_solve(make_instance([("x", "lt", "y"), ("y", "lt", "x"), ("x", "neq", "y")], 1))
    assert res.route == "lt-neq" and res.solution.cost == 1
    assert len(set(res.ranks.values())) == 2


def test_route_lt_neq_pays_for_neq_loops():
    res = dispatch_solve(make_instance([("x", "neq", "x", True, 2), ("x", "lt", "y")], 1))
    assert res.route == "lt-neq" and res.solution.deleted == {0} and res.solution.weight == 2


def test_route_hard_language_with_notice():
    res = dispatch_solve(make_instance([("x", "leq", "y"), ("y", "leq", "x"), ("x", "neq", "y")], 1))
    assert res.route == "oracle" and res.solution.cost == 1
    assert res.notices == [HARDNESS_NOTICE]


def test_route_poly_time():
    res = dispatch_solve(make_instance([("x", "leq", "y")], 0))
    assert res.route == "trivial" and res.solution.cost == 0


def test_route_rewrite_oracle():
    res = dispatch_solve(make_instance([("x", "lt", "y"), ("y", "leq", "x"), ("x", "eq", "y")], 1))
    assert res.route == "rewrite-oracle" and res.notices == [NON_FPT_NOTICE]
    assert res.solution.cost == 1


def test_unsat_crisp_and_no():
    res = dispatch_solve(make_instance([("x", "lt", "y", False), ("y", "lt", "x", False)], 3))
    assert res.status == "UNSAT-CRISP"
    assert dispatch_solve(make_instance([("x", "lt", "y"), ("y", "lt", "x")], 0)).status == "NO"


def test_engine_choice():
    inst = make_instance([("x", "lt", "y"), ("y", "lt", "x")], 1)
    assert dispatch_solve(inst, engine="oracle").route == "oracle"
    with pytest.raises(ValueError):
        dispatch_solve(make_instance([("x", "leq", "y")], 0), engine="pipeline")
    with pytest.raises(ValueError):
        dispatch_solve(inst, engine="magic")


def test_dispatch_matches_oracle_on_all_languages():
    languages = [("lt", "neq"), ("lt", "eq", "neq"), ("lt", "leq", "eq"), ("leq", "neq"),
                 ("eq", "leq"), ("neq",), ("lt", "leq", "eq", "neq")]
    for seed in range(140):
        rels = languages[seed % len(languages)]
        inst = gen_random_instance(seed, 4, 6, rels, crisp_prob=0.2, max_weight=3, k=2,
                                   W=7 if seed % 3 == 0 else float("inf"), self_loops=seed % 5 == 0)
        ref = brute_force_mincsp(inst)
        res = dispatch_solve(inst)
        if ref is None:
            assert res.status in ("NO", "UNSAT-CRISP")
        else:
            assert (res.solution.cost, res.solution.weight) == (ref[0].cost, ref[0].weight)


# generation -----------------------------------------------------------------

def test_gen_is_deterministic():
    a = gen_random_instance(9, 5, 8, ("eq", "neq"), max_weight=4)
    assert a == gen_random_instance(9, 5, 8, ("eq", "neq"), max_weight=4)
    assert a.relations <= {EQ, NEQ}
    assert all(c.soft for c in a.constraints)
    assert not any(c.is_self_loop for c in a.constraints)


# CLI ------------------------------------------------------------------------

def test_cli_solve_output_schema(tmp_path, capsys):
    f = write(tmp_path, "a.txt", "k 1\nlt x y soft\nlt y x soft\n")
    code, out, err = run(["solve", f, "--rational"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "YES cost=1 weight=1"
    assert lines[1] == "delete 0"
    assert [l.split()[1] for l in lines if l.startswith("assign")] == ["x", "y"]
    assert any(l.startswith("value y ") and "/" in l for l in lines)


def test_cli_solve_no_and_unsat(tmp_path, capsys):
    assert run(["solve", write(tmp_path, "n.txt", "k 0\nlt x y soft\nlt y x soft\n")], capsys)[:2] == (1, "NO\n")
    code, out, _ = run(["solve", write(tmp_path, "u.txt", "k 2\nlt x y crisp\nlt y x crisp\n")], capsys)
    assert (code, out) == (1, "UNSAT-CRISP\n")


def test_cli_notice_goes_to_stderr(tmp_path, capsys):
    f = write(tmp_path, "h.txt", "k 1\nleq x y soft\nleq y x soft\nneq x y soft\n")
    code, out, err = run(["solve", f], capsys)
    assert code == 0 and HARDNESS_NOTICE in err and "notice" not in out


def test_cli_format_error_exit_2(tmp_path, capsys):
    code, _, err = run(["solve", write(tmp_path, "bad.txt", "k 1\nzz x y soft\n")], capsys)
    assert code == 2 and "line 2" in err


def test_cli_missing_file_exit_2(tmp_path, capsys):
    assert run(["sat", str(tmp_path / "missing.txt")], capsys)[0] == 2


def test_cli_guard_exit_3(tmp_path, capsys):
    rows = "".join(f"leq v{i} v{i + 1} soft\n" for i in range(10)) + "neq v0 v10 soft\n"
    assert run(["solve", write(tmp_path, "big.txt", "k 1\n" + rows)], capsys)[0] == 3


def test_cli_sat(tmp_path, capsys):
    code, out, _ = run(["sat", write(tmp_path, "s.txt", "k 0\nlt a b crisp\nleq b c soft\n")], capsys)
    assert code == 0 and out.splitlines()[0] == "YES" and len(out.splitlines()) == 4
    assert run(["sat", write(tmp_path, "t.txt", "k 0\nlt a a soft\n")], capsys)[:2] == (1, "NO\n")


def test_cli_classify(tmp_path, capsys):
    assert run(["classify", "--relations", "leq,neq"], capsys)[1] == "W1Hard\n"
    assert run(["classify", "--relations", "lt,eq,neq"], capsys)[1] == "FPT\n"
    assert run(["classify", "--relations", ""], capsys)[1] == "PolyTime\n"
    assert run(["classify", write(tmp_path, "c.txt", "k 0\neq a b soft\n")], capsys)[1] == "PolyTime\n"
    assert run(["classify", "--relations", "foo"], capsys)[0] == 2
    assert run(["classify"], capsys)[0] == 2


def test_cli_reduce_and_back(tmp_path, capsys):
    f = write(tmp_path, "r.txt", "k 1\nleq x y soft\nleq y x soft\nneq x y soft\n")
    code, out, _ = run(["reduce", f, "--to", "dsmc"], capsys)
    assert code == 0 and out.startswith("kind dsmc")
    g = write(tmp_path, "r.graph", out)
    code, back, _ = run(["reduce", g, "--to", "mincsp"], capsys)
    assert back == serialize_instance(make_instance(
        [("x", "leq", "y"), ("y", "leq", "x"), ("x", "neq", "y")], 1))
    assert run(["reduce", f, "--to", "dfas"], capsys)[0] == 2


def test_cli_booleanize(tmp_path, capsys):
    f = write(tmp_path, "b.txt", "k 1\nlt a b soft\n")
    code, out, _ = run(["booleanize", f, "--order", "a"], capsys)
    assert code == 0 and "bvar c a 1" in out.splitlines()
    assert run(["booleanize", f, "--order", "zz"], capsys)[0] == 2


def test_cli_oracle_detects_formats(tmp_path, capsys):
    code, out, _ = run(["oracle", write(tmp_path, "o.txt", "k 1\nlt x y soft\nlt y x soft\n")], capsys)
    assert code == 0 and out.startswith("YES cost=1")
    code, out, _ = run(["oracle", write(tmp_path, "o.graph", "kind dsmc\nk 1\narc a b soft\narc b a soft\npair a b soft\n")], capsys)
    assert code == 0 and out.startswith("YES cost=1")
    code, out, _ = run(["oracle", write(tmp_path, "o.clq", "k 2\npart 1 a b\npart 2 c d\nedge a c\n")], capsys)
    assert (code, out) == (0, "YES\nvertex a\nvertex c\n")


def test_cli_gadget_build_and_verify(tmp_path, capsys):
    clq = write(tmp_path, "g.clq", "k 2\npart 1 a1 a2\npart 2 b1 b2\nedge a1 b1\n")
    out_path = tmp_path / "g.graph"
    assert run(["gadget", "build", clq, "-o", str(out_path)], capsys)[0] == 0
    assert out_path.read_text().startswith("kind dsmc")
    assert json.loads((tmp_path / "g.graph.map.json").read_text())["k"] == 2
    code, out, _ = run(["gadget", "verify", clq], capsys)
    assert code == 0 and out.splitlines()[-1] == "PASS"


def test_cli_gen_deterministic(capsys):
    a = run(["--seed", "5", "gen", "--vars", "4", "--relations", "eq,neq"], capsys)[1]
    b = run(["gen", "--seed", "5", "--vars", "4", "--relations", "eq,neq"], capsys)[1]
    assert a == b and a.startswith("k 1")
    assert run(["gen", "--vars", "0"], capsys)[0] == 2


def test_cli_bench_unknown_suite(capsys):
    code, _, err = run(["bench", "nope"], capsys)
    assert code == 2 and "unknown suite" in err


def test_cli_bench_small_run(capsys):
    code, out, _ = run(["bench", "boolean-vs-subsets", "--count", "5", "--deterministic"], capsys)
    assert code == 0 and "5/5" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pa_mincsp", "classify", "--relations", "lt"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "FPT\n"
