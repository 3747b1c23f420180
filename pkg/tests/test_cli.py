import subprocess
import sys

import pytest

from hookprod.cli import main


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsys.readouterr()
        return code, out, err
    return _run


def test_diagram(run, data_dir):
    code, out, _ = run("diagram", "--complex", data_dir / "example1.cplx", "--function", "f", "--degree", 1)
    assert code == 0
    assert out == "birth,death\n0,1\n100,101\n"


def test_diagram_to_file(run, data_dir, tmp_path):
    dest = tmp_path / "pd.csv"
    code, out, _ = run("diagram", "--complex", data_dir / "example1.cplx", "--function", "g",
                       "--degree", 1, "-o", dest)
    assert code == 0 and out == ""
    assert dest.read_text() == "birth,death\n0,1\n100,101\n"


def test_product(run, data_dir, tmp_path):
    pd = tmp_path / "pd.csv"
    pd.write_text("birth,death\n0,1\n100,101\n")
    code, out, _ = run("product", "--pdf", pd, "--pdg", pd, "--matching", data_dir / "swap.match")
    assert code == 0
    assert out == "p1,p2,q1,q2\n0,100,1,101\n100,0,101,1\n"
    code, out, _ = run("product", "--pdf", pd, "--pdg", pd, "--matching", data_dir / "identity.match")
    assert out == "p1,p2,q1,q2\n0,0,1,1\n100,100,101,101\n"


def test_product_invalid_matching(run, data_dir, tmp_path):
    pd = tmp_path / "pd.csv"
    pd.write_text("birth,death\n0,1\n")
    code, _, err = run("product", "--pdf", pd, "--pdg", pd, "--matching", data_dir / "swap.match")
    assert code == 2 and "InvalidMatching" in err


def test_grid(run, data_dir):
    code, out, _ = run("grid", "--complex", data_dir / "example1.cplx", "--degree", 1)
    assert code == 0
    lines = out.splitlines()
    assert lines[:2] == ["# box 103 103", "r1,r2,s1,s2,rank"]
    assert "0,100,0,100,1" in lines and "101,101,101,101,0" in lines


def test_gammabar(run, data_dir):
    code, out, _ = run("gammabar", "--complex", data_dir / "example1.cplx", "--degree", 1)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "objective: exact_interleaving"
    assert lines[1] == "best_value: 0"
    assert lines[3] == "tied_minimizers: 1"
    assert lines[4:] == ["best_matching:", "match 0 1", "match 1 0"]


def test_gammabar_budget_exit(run, data_dir):
    code, _, err = run("gammabar", "--complex", data_dir / "example1.cplx", "--degree", 1,
                       "--max-points", 1)
    assert code == 3 and "BudgetExceeded" in err
    code, _, _ = run("gammabar", "--complex", data_dir / "two_births.cplx", "--degree", 0,
                     "--objective", "exact")
    assert code == 3


def test_gammabar_auto_fallback(run, data_dir):
    code, out, _ = run("gammabar", "--complex", data_dir / "two_births.cplx", "--degree", 0)
    assert code == 0
    assert out.startswith("objective: matching_distance_estimate\n")


def test_check_hook(run, data_dir):
    code, out, _ = run("check-hook", "--complex", data_dir / "example1.cplx", "--degree", 1)
    assert code == 0
    assert out == ("verdict: hook-decomposable\np1,p2,q1,q2\n0,100,1,101\n100,0,101,1\n"
                   "round-trip: ok\n")
    code, out, _ = run("check-hook", "--complex", data_dir / "two_births.cplx", "--degree", 0)
    assert code == 0
    assert out.startswith("verdict: NotHookDecomposable\nreason: ")


def test_svg(run, data_dir, tmp_path):
    h1 = tmp_path / "a.csv"
    h1.write_text("p1,p2,q1,q2\n0,100,1,101\n100,0,101,1\n")
    h2 = tmp_path / "b.csv"
    h2.write_text("p1,p2,q1,q2\n0,0,1,1\n100,100,101,101\n")
    code, out, _ = run("svg", "--hooks", h1, "--hooks2", h2, "--box", 103, 103, "--title", "overlay")
    assert code == 0
    assert out.startswith("<?xml") and out.rstrip().endswith("</svg>")
    assert out.count("<polygon") == 4
    assert 'id="module1"' in out


def test_missing_file(run, tmp_path):
    code, _, err = run("diagram", "--complex", tmp_path / "nope.cplx", "--function", "f", "--degree", 0)
    assert code == 2
    assert "nope.cplx" in err


def test_syntax_error(run, tmp_path):
    bad = tmp_path / "bad.cplx"
    bad.write_text("simplex 0 f=0\nsimplx 1 f=0\n")
    code, _, err = run("diagram", "--complex", bad, "--function", "f", "--degree", 0)
    assert code == 2 and "line 2" in err


def test_missing_g_exit(run, tmp_path):
    c = tmp_path / "f_only.cplx"
    c.write_text("simplex 0 f=0\n")
    code, _, err = run("grid", "--complex", c, "--degree", 0)
    assert code == 2 and "MissingG" in err


def test_bad_prime(run, data_dir):
    code, _, err = run("diagram", "--complex", data_dir / "example1.cplx", "--function", "f",
                       "--degree", 1, "--prime", 4)
    assert code == 2 and "not prime" in err


def test_prime_from_environment(monkeypatch, run, data_dir):
    monkeypatch.setenv("HOOKPROD_PRIME", "3")
    code, out, _ = run("diagram", "--complex", data_dir / "example1.cplx", "--function", "f", "--degree", 1)
    assert code == 0 and out == "birth,death\n0,1\n100,101\n"


def test_usage_error(run):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["diagram", "--function", "f", "--degree", "1"],
    ["grid", "--degree", "1"],
    ["gammabar", "--degree", "1"],
    ["check-hook", "--degree", "1"],
])
def test_byte_identical_runs(data_dir, argv):
    full = [sys.executable, "-m", "hookprod.cli"] + argv + ["--complex", str(data_dir / "example1.cplx")]
    outs = {subprocess.run(full, capture_output=True, check=True).stdout for _ in range(3)}
    assert len(outs) == 1


def test_degree_zero_two_components(run, data_dir):
    code, out, _ = run("diagram", "--complex", data_dir / "example1.cplx", "--function", "f", "--degree", 0)
    assert code == 0
    assert [r for r in out.splitlines() if r.endswith(",inf")] == ["0,inf", "100,inf"]


def test_product_empty(run, data_dir, tmp_path):
    pd = tmp_path / "empty.csv"
    pd.write_text("birth,death\n")
    m = tmp_path / "empty.match"
    m.write_text("")
    code, out, _ = run("product", "--pdf", pd, "--pdg", pd, "--matching", m)
    assert code == 0 and out == "p1,p2,q1,q2\n"


def test_gammabar_one_cycle(run, data_dir):
    code, out, _ = run("gammabar", "--complex", data_dir / "one_cycle.cplx", "--degree", 1)
    assert code == 0
    assert "best_value: 0\n" in out and out.endswith("best_matching:\nmatch 0 0\n")


def test_check_hook_contractible(run, data_dir, tmp_path):
    c = tmp_path / "filled.cplx"
    c.write_text((data_dir / "one_cycle.cplx").read_text().replace("f=2 g=2", "f=0 g=0"))
    code, out, _ = run("check-hook", "--complex", c, "--degree", 1)
    assert code == 0
    assert out == "verdict: hook-decomposable\np1,p2,q1,q2\nround-trip: ok\n"


def test_svg_empty(run, tmp_path):
    h = tmp_path / "none.csv"
    h.write_text("p1,p2,q1,q2\n")
    code, out, _ = run("svg", "--hooks", h, "--box", 4, 4)
    assert code == 0 and "<polygon" not in out and "</svg>" in out
