import csv
import json

import pytest

from sslab import Instance, brute_solve, mask_sum, read_instance, write_instance
from sslab.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    lines = [json.loads(line) for line in captured.out.splitlines() if line.strip()]
    return code, lines, captured.err


def test_gen_writes_instance(tmp_path, capsys):
    out = tmp_path / "inst.txt"
    code, lines, err = _run(capsys, "gen", "--kind", "density", "--n", "10",
                            "--d", "1", "--seed", "7", "--out", str(out))
    assert code == 0
    assert lines[0]["n"] == 10 and lines[0]["kind"] == "density"
    inst = read_instance(out)
    assert inst.n == 10
    assert "wrote" in err


def test_gen_planted_reports_witness(tmp_path, capsys):
    out = tmp_path / "p.txt"
    code, lines, _ = _run(capsys, "gen", "--kind", "planted", "--n", "10",
                          "--bits", "12", "--seed", "3", "--out", str(out))
    assert code == 0
    inst = read_instance(out)
    mask = int(lines[0]["planted_mask_hex"], 16)
    assert mask_sum(inst.weights, mask) == inst.target


def test_gen_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    _run(capsys, "gen", "--kind", "density", "--n", "12", "--seed", "5", "--out", str(a))
    _run(capsys, "gen", "--kind", "density", "--n", "12", "--seed", "5", "--out", str(b))
    assert a.read_text() == b.read_text()


def test_analyze_frozen_values(tmp_path, capsys):
    path = tmp_path / "i.txt"
    write_instance(Instance(weights=(1, 1, 3, 3), target=4), path)
    code, lines, _ = _run(capsys, "analyze", str(path))
    assert code == 0
    assert lines[0] == {
        "n": 4, "density": 4 / 2.0, "beta": 4, "distinct_sums": 9,
        "l2_norm_squared": 36,
    }


def test_classify_reports_regimes(tmp_path, capsys):
    path = tmp_path / "i.txt"
    write_instance(Instance(weights=(1,) * 12, target=6), path)
    code, lines, _ = _run(capsys, "classify", str(path))
    assert code == 0
    rep = lines[0]
    assert rep["beta"] == 924 and rep["large_bin"] is True
    assert set(rep) >= {"n", "density", "beta", "distinct", "small_bin",
                        "large_bin", "many_sums", "sums_vs_bin_holds"}


def test_solve_algorithms_agree_with_brute(tmp_path, capsys):
    path = tmp_path / "i.txt"
    _run(capsys, "gen", "--kind", "density", "--n", "12", "--d", "2",
         "--seed", "11", "--out", str(path))
    inst = read_instance(path)
    expect = brute_solve(inst).found
    for alg in ("dp", "mim", "ss", "fewsums", "largebin", "auto"):
        code, lines, _ = _run(capsys, "solve", str(path), "--alg", alg, "--seed", "2")
        assert code == 0
        rec = lines[0]
        assert rec["found"] == expect
        assert rec["alg"] == alg
        assert "step_counters" in rec and "branch_taken" in rec
        if rec["found"]:
            mask = int(rec["witness_mask_hex"], 16)
            assert mask_sum(inst.weights, mask) == inst.target


def test_solve_repr_emits_iterations(tmp_path, capsys):
    path = tmp_path / "i.txt"
    _run(capsys, "gen", "--kind", "planted", "--n", "12", "--bits", "12",
         "--seed", "19", "--out", str(path))
    code, lines, _ = _run(capsys, "solve", str(path), "--alg", "repr", "--seed", "4")
    assert code == 0
    rec = lines[0]
    if rec["found"]:
        assert rec["iterations"]
        assert {"p", "t_l", "s1", "pairs_scanned"} <= set(rec["iterations"][0])


def test_solve_sampler(tmp_path, capsys):
    path = tmp_path / "i.txt"
    write_instance(Instance(weights=(3, 5, 9, 14, 21, 33, 50, 61), target=45), path)
    code, lines, _ = _run(capsys, "solve", str(path), "--alg", "sampler",
                          "--seed", "1", "--budget", "5000")
    assert code == 0
    assert lines[0]["found"] is True


def test_hash_roundtrip(tmp_path, capsys):
    src, dst = tmp_path / "i.txt", tmp_path / "r.txt"
    _run(capsys, "gen", "--kind", "density", "--n", "12", "--d", "0.5",
         "--seed", "13", "--out", str(src))
    code, lines, _ = _run(capsys, "hash", str(src), "--B", "1024",
                          "--seed", "2", "--out", str(dst))
    assert code == 0
    rec = lines[0]
    assert rec["rounds"] == len(rec["chain"])
    assert rec["p"] == rec["chain"][-1][0] and rec["r"] == rec["chain"][-1][1]
    reduced = read_instance(dst)
    assert reduced.n == 12
    assert max(reduced.weights) < 4 * 12 * 1024 * 10  # output bound at B=2^10


def test_verify_corpus_passes(capsys):
    code, lines, err = _run(capsys, "verify", "--checks", "l2identity,udcp",
                            "--n-max", "8", "--seed", "1")
    assert code == 0
    by_check = {rec["check"]: rec for rec in lines}
    assert by_check["l2identity"]["violations"] == 0
    assert by_check["udcp"]["violations"] == 0
    assert by_check["l2identity"]["instances"] > 0
    assert "passed" in err


def test_verify_single_file(tmp_path, capsys):
    path = tmp_path / "i.txt"
    write_instance(Instance(weights=(1, 1, 3, 3), target=4), path)
    code, lines, _ = _run(capsys, "verify", str(path))
    assert code == 0
    assert all(rec["violations"] == 0 for rec in lines)


def test_verify_unknown_check_is_domain_error(capsys):
    code, _, err = _run(capsys, "verify", "--checks", "bogus")
    assert code == 1
    assert "error:" in err


def test_bench_writes_csv(tmp_path, capsys):
    out = tmp_path / "b.csv"
    code, lines, _ = _run(capsys, "bench", "--alg", "mim", "--n-from", "8",
                          "--n-to", "11", "--csv", str(out))
    assert code == 0
    assert lines[0]["rows"] == 4
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert [r["n"] for r in rows] == ["8", "9", "10", "11"]
    assert all(int(r["sums_enumerated"]) > 0 for r in rows)


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "missing.txt"])  # --alg is required
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_missing_file_is_reported(capsys):
    code, _, err = _run(capsys, "solve", "/nonexistent/inst.txt", "--alg", "dp")
    assert code == 1
    assert "error:" in err


def test_solve_output_is_deterministic(tmp_path, capsys):
    path = tmp_path / "i.txt"
    _run(capsys, "gen", "--kind", "density", "--n", "12", "--d", "1",
         "--seed", "23", "--out", str(path))
    main(["solve", str(path), "--alg", "auto", "--seed", "9"])
    first = capsys.readouterr().out
    main(["solve", str(path), "--alg", "auto", "--seed", "9"])
    assert capsys.readouterr().out == first
