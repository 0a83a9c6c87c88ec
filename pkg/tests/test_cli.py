import json

import pytest

from hyperturan.cli import EXIT_GUARD, EXIT_OK, EXIT_USAGE, EXIT_VIOLATED, main, read_weights, UsageError
from hyperturan.extremal import gen_fano
from hyperturan.hypercore import complete_graph, parse_hg, read_hg, write_hg


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def fano_file(tmp_path):
    p = tmp_path / "fano.hg"
    write_hg(gen_fano(), p)
    return str(p)


def test_gen_turan(capsys):
    code, out, _ = run(capsys, "gen", "--turan", "6", "3")
    assert code == EXIT_OK
    H = parse_hg(out)
    assert (H.r, H.n, len(H)) == (3, 6, 8)


@pytest.mark.parametrize("args", [["--fano"], ["--affine9"], ["--complete", "5", "3"], ["--triangle", "4", "2"]])
def test_gen_round_trip(capsys, tmp_path, args):
    code, out, _ = run(capsys, "gen", *args)
    H = parse_hg(out)
    path = tmp_path / "g.hg"
    assert run(capsys, "gen", *args, "-o", str(path))[0] == EXIT_OK
    assert read_hg(path) == H


def test_gen_blowup(capsys, fano_file):
    code, out, _ = run(capsys, "gen", "--blowup", fano_file, "--sizes", "2,1,1,1,1,1,1")
    assert code == EXIT_OK and len(parse_hg(out)) == 10


def test_check(capsys, fano_file, tmp_path):
    code, out, _ = run(capsys, "check", "--pattern", "tfam", fano_file, "--format", "json")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["free"] is True and rec["witness"] is None and rec["two_covered"]
    k4 = tmp_path / "k4.hg"
    write_hg(complete_graph(4, 3), k4)
    code, out, _ = run(capsys, "check", "--pattern", "tfam", str(k4), "--expect-free")
    assert code == EXIT_VIOLATED and "free: false" in out and "witness: [1, 2, 3]" in out
    assert run(capsys, "check", "--pattern", "tfam", str(k4))[0] == EXIT_OK


def test_check_bad_pattern(capsys, fano_file):
    code, out, err = run(capsys, "check", "--pattern", "t:4:1", fano_file)
    assert code == EXIT_USAGE and out == "" and "uniformity" in err


def test_lagrangian(capsys, fano_file):
    code, out, _ = run(capsys, "lagrangian", fano_file, "--format", "json")
    rec = json.loads(out)
    assert rec["exact_value"] == "1/27" and rec["certified"] and rec["structure"] == "PASS"
    assert rec["tolerance"] == 1e-9 and len(rec["support"]) == 3


def test_determinism_and_threads(capsys, fano_file):
    a = run(capsys, "lagrangian", fano_file, "--threads", "1", "--restarts", "6")[1]
    b = run(capsys, "lagrangian", fano_file, "--threads", "3", "--restarts", "6")[1]
    c = run(capsys, "lagrangian", fano_file, "--threads", "1", "--restarts", "6")[1]
    assert a == b == c


def test_threads_env(capsys, fano_file, monkeypatch):
    monkeypatch.setenv("HYPERTURAN_THREADS", "2")
    assert run(capsys, "lagrangian", fano_file)[0] == EXIT_OK
    monkeypatch.setenv("HYPERTURAN_THREADS", "zero")
    assert run(capsys, "lagrangian", fano_file)[0] == EXIT_USAGE


def test_entropy(capsys, fano_file, tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("\n".join(["0.1428571"] * 7) + "\n")
    code, out, _ = run(capsys, "entropy", fano_file, str(w), "--format", "json")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["log_base"] == 2
    assert max(rec["gap_residual"]) <= 1e-9 and rec["optimum_identity_residual"] <= 1e-8
    assert rec["optimum_alpha"] == pytest.approx([1 / 3, 2 / 3, 1])


def test_weight_file_rules(tmp_path):
    p = tmp_path / "w.txt"
    p.write_text("0.5\n0.5000005\n")
    assert read_weights(p, 2).sum() == pytest.approx(1.0, abs=1e-15)
    p.write_text("0.5\n0.51\n")
    with pytest.raises(UsageError):
        read_weights(p, 2)
    p.write_text("0.5\nabc\n")
    with pytest.raises(UsageError):
        read_weights(p, 2)
    p.write_text("1.5\n-0.5\n")
    with pytest.raises(UsageError):
        read_weights(p, 2)


def test_extremal(capsys, tmp_path):
    code, out, _ = run(capsys, "extremal", "--n", "6", "--r", "3", "--pattern", "cfam",
                       "--witnesses", str(tmp_path / "w"), "--format", "json")
    rec = json.loads(out)
    assert code == EXIT_OK and rec["max_edges"] == 8 and rec["witness_classes"] == 1
    files = list((tmp_path / "w").iterdir())
    assert len(files) == 1 and len(read_hg(files[0])) == 8
    assert "wall_time_s" not in rec


def test_extremal_guard(capsys):
    code, out, err = run(capsys, "extremal", "--n", "9", "--r", "3", "--pattern", "tfam")
    assert code == EXIT_GUARD and out == "" and "scale guard" in err
    code, out, _ = run(capsys, "extremal", "--n", "9", "--r", "3", "--pattern", "tfam", "--incomplete",
                       "--trials", "20")
    assert code == EXIT_OK and "complete: false" in out


def test_symmetrize(capsys, tmp_path):
    p = tmp_path / "t.hg"
    assert run(capsys, "gen", "--turan", "6", "3", "-o", str(p))[0] == EXIT_OK
    code, out, _ = run(capsys, "symmetrize", str(p), "--format", "json", "--pattern-out", str(tmp_path / "pat.hg"))
    rec = json.loads(out)
    assert rec["sizes"] == [2, 2, 2] and rec["symmetrized"]
    assert read_hg(tmp_path / "pat.hg") == complete_graph(3, 3)


def test_survey(capsys):
    code, out, _ = run(capsys, "survey", "--r", "2", "--L", "0", "--n-max", "5", "--format", "json")
    rec = json.loads(out)
    assert code == EXIT_OK and all(rec["attains_1_over_r_pow_r"].values())


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys, "gen")[0] == EXIT_USAGE
    assert run(capsys, "check", str(tmp_path / "missing.hg"), "--pattern", "tfam")[0] == EXIT_USAGE
    bad = tmp_path / "bad.hg"
    bad.write_text("3 4\n1 2\n")
    code, _, err = run(capsys, "check", str(bad), "--pattern", "tfam")
    assert code == EXIT_USAGE and "expected 3" in err
    assert run(capsys, "lagrangian", str(bad), "--restarts", "0")[0] == EXIT_USAGE


def test_text_report_grammar(capsys, fano_file):
    _, out, _ = run(capsys, "lagrangian", fano_file)
    lines = out.splitlines()
    assert lines[0] == "format_version: 1"
    assert all(": " in ln for ln in lines)
