import json

import pytest

from lucodes.cli import main
from lucodes.ldpc import import_alist
from lucodes.incidence import load_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_P1L1_file(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("LUCODES_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "build", "--q", "3", "--which", "P1L1")
    assert code == 0
    record = json.loads(out)
    assert record["shape"] == [27, 27]
    M = load_matrix((tmp_path / "P1L1_q3.txt").read_text())
    assert M.shape == (27, 27)


def test_build_alist(capsys, tmp_path):
    target = tmp_path / "h.alist"
    code, _, _ = run(capsys, "build", "--q", "2", "--which", "H3Q", "--format", "alist", "--out", str(target))
    assert code == 0
    assert target.read_text().splitlines()[:2] == ["8 8", "2 2"]
    assert import_alist(target).shape == (8, 8)


def test_build_json_stdout(capsys):
    code, out, _ = run(capsys, "build", "--q", "2", "--which", "PL", "--format", "json", "--out", "-")
    data = json.loads(out)
    assert code == 0 and data["n_rows"] == 15 and all(len(r) == 3 for r in data["rows"])


def test_invalid_q_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build", "--q", "6", "--which", "PL"])
    assert exc.value.code == 2
    assert "not a prime power" in capsys.readouterr().err


def test_missing_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_rank_P1L1_q3(capsys):
    code, out, _ = run(capsys, "rank", "--q", "3", "--which", "P1L1")
    assert code == 0
    assert json.loads(out) == {"q": 3, "which": "P1L1", "computed": 19, "expected": 19, "pass": True}


def test_rank_PL_q4_text(capsys):
    code, out, _ = run(capsys, "rank", "--q", "4", "--which", "PL", "--format", "text")
    assert code == 0 and out == "50\nexpected 50 PASS\n"


def test_rank_even_no_formula(capsys):
    code, out, _ = run(capsys, "rank", "--q", "2", "--which", "P1L1")
    data = json.loads(out)
    assert code == 0 and data["computed"] == 6 and data["expected"] == "n/a (even q)"


def test_verify_all_q3(capsys):
    code, out, _ = run(capsys, "verify", "--q", "3", "--suite", "all")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert all(e["passed"] for e in data["lemmas"].values())


def test_verify_formulas(capsys):
    code, out, _ = run(capsys, "verify", "--q", "5", "--suite", "formulas")
    data = json.loads(out)
    assert code == 0 and data["ranks"]["pass_rank_P1L1"] and data["ranks"]["pass_dim_LU"]


def test_verify_q16_formulas(capsys):
    code, out, _ = run(capsys, "verify", "--q", "16", "--suite", "formulas")
    data = json.loads(out)
    assert code == 0 and data["ranks"]["pass_rank_PL"] and data["ranks"]["bound_attained"]


def test_verify_failure_exit_code(capsys, monkeypatch):
    import lucodes.cli as cli
    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: {"q": 3, "passed": False})
    code, _, _ = run(capsys, "verify", "--q", "3")
    assert code == 1


@pytest.mark.parametrize("q", [3, 5])
def test_equiv(capsys, q):
    code, out, _ = run(capsys, "equiv", "--q", str(q))
    data = json.loads(out)
    assert code == 0 and data["passed"] and len(data["point_perm"]) == q ** 3


def test_simulate_zero_noise(capsys):
    code, out, _ = run(capsys, "simulate", "--q", "3", "--channel", "bsc", "--param", "0", "--trials", "10", "--seed", "1")
    assert code == 0
    assert out == "channel,param,trials,seed,bit_errors,frame_errors\nbsc,0.0,10,1,0,0\n"


def test_simulate_bad_param(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--q", "3", "--channel", "bsc", "--param", "2", "--trials", "1"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["verify", "--q", "3"],
    ["equiv", "--q", "4"],
    ["simulate", "--q", "3", "--channel", "bsc", "--param", "0.05", "--trials", "50", "--seed", "7"],
    ["build", "--q", "3", "--which", "H3Q", "--format", "alist", "--out", "-"],
])
def test_outputs_byte_identical(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
