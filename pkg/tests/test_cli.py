import subprocess
import sys

import pytest

from nmworkbench.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_infer_tweety(capsys):
    assert run(capsys, "infer", "tweety.net", "a", "d") == (0, "a => d : -\n", "")


def test_infer_all_and_modes(capsys):
    code, out, _ = run(capsys, "--mode", "total", "infer", "split-total.net")
    assert code == 0 and "u => y : ?" in out
    code, out, _ = run(capsys, "infer", "split-total.net", "u", "y", "--mode", "split")
    assert out == "u => y : -\n"


def test_check_need_pr(capsys):
    code, out, _ = run(capsys, "check", "need-pr.cf", "muPR")
    assert code == 1
    assert "witness: ({a,b,c}, {a,b})" in out


def test_check_sizes(capsys):
    assert run(capsys, "check", "not-i-3.sz", "OR:3")[0] == 0
    assert run(capsys, "check", "not-i-3.sz", "nStar:3")[0] == 1


def test_represent_then_verify(capsys, tmp_path):
    for kind, ext in (("general", "ps"), ("smooth", "ps"), ("level3", "gs")):
        code, out, _ = run(capsys, "represent", "a-ranked.cf", "--kind", kind)
        if code == 1:
            assert out.startswith("refused")
            continue
        p = tmp_path / f"s.{ext}"
        p.write_text(out)
        assert run(capsys, "verify", str(p), "a-ranked.cf")[:2] == (0, "verified\n")


def test_represent_refusal(capsys):
    code, out, _ = run(capsys, "represent", "rank-copies.cf", "--kind", "ranked")
    assert code == 1 and "muEmptyFin" in out


def test_verify_mismatch(capsys, tmp_path):
    p = tmp_path / "flat.ps"
    p.write_text("copy a 0\ncopy b 0\n")
    code, out, _ = run(capsys, "verify", str(p), "rank-copies.cf")
    assert code == 1 and out.startswith("mismatch")


def test_input_errors(capsys):
    assert run(capsys, "infer", "missing.net", "a", "b")[0] == 2
    assert run(capsys, "infer", "tweety.net", "a", "zz")[0] == 2
    assert run(capsys, "check", "need-pr.cf", "muNope")[0] == 2
    assert run(capsys, "check", "tweety.net", "muPR")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_parse_error_exit(capsys, tmp_path):
    p = tmp_path / "bad.net"
    p.write_text("a ->\n")
    code, _, err = run(capsys, "infer", str(p))
    assert code == 2 and "line 1" in err


def test_reactive_horizon_export(capsys):
    code, out, _ = run(capsys, "reactive", "inher-univ.net", "x")
    assert code == 0 and "(x->c) ~> (g!>b)" in out
    assert run(capsys, "horizon", "horizon-1.net", "a")[1] == "a b\n"
    code, out, _ = run(capsys, "export-dot", "tweety.net")
    assert out.startswith("digraph")
    code, out, _ = run(capsys, "simulate", "circuit2.circ", "--steps", "8")
    assert code == 0 and out.splitlines()[-1].split()[1:] == list("TFFFTFFT")


def test_search_prints_seed_and_is_deterministic(capsys):
    a = run(capsys, "--seed", "4", "search", "--hyp", "muSub", "--hyp", "muPR", "--concl", "muCUM")
    b = run(capsys, "--seed", "4", "search", "--hyp", "muSub", "--hyp", "muPR", "--concl", "muCUM")
    assert a == b and a[0] == 1
    assert a[1].startswith("# seed 4")
    assert run(capsys, "search", "--hyp", "muSub", "--hyp", "muSubSup", "--concl", "muCUM")[0] == 0


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "nmworkbench.cli", "infer", "tweety.net", "a", "d"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "a => d : -\n"
