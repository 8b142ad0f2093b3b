import math

import pytest

from kpol.cli import (
    CSV_HEADER,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_SOLVER,
    EXIT_VERIFY,
    BenchRow,
    bench_fits,
    exponent_table,
    fit_exponent,
    main,
    parse_int_list,
    rows_from_csv,
    rows_to_csv,
    run_bench,
)
from kpol.exceptions import InsufficientData, NonPositive, ParseError
from kpol.instance import loads


def test_fit_exponent_examples():
    assert fit_exponent([(n, n**2) for n in (4, 8, 16, 32)]) == pytest.approx(2.0)
    assert fit_exponent([(n, 7) for n in (4, 8, 16)]) == pytest.approx(0.0)
    slope = fit_exponent([(n, n**3 + n) for n in (8, 16, 32, 64)])
    assert 2.9 < slope < 3.0
    with pytest.raises(InsufficientData):
        fit_exponent([(4, 16)])
    with pytest.raises(InsufficientData):
        fit_exponent([(4, 16), (4, 17)])
    with pytest.raises(NonPositive):
        fit_exponent([(4, 0), (8, 3)])


def test_parse_int_list():
    assert parse_int_list("8,16") == [8, 16]
    assert parse_int_list("4..6") == [4, 5, 6]
    assert parse_int_list("2,4..5") == [2, 4, 5]
    for bad in ("", "x", "4..y"):
        with pytest.raises(ParseError):
            parse_int_list(bad)


def test_csv_roundtrip():
    rows = [BenchRow(8, 3, "brute", "random", 1, "NO", 512, 0, 3, 1.5), BenchRow(16, 4, "mitm", "ksum", 2, "YES", 99, 4, 0, 0.25)]
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert rows_from_csv(text) == rows
    with pytest.raises(ParseError):
        rows_from_csv("n,k\n1,2\n")
    with pytest.raises(ParseError):
        rows_from_csv(text.replace("512", "many"))


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen", "--k", "4", "--n", "5", "--seed", "3", "--out", str(a)]) == EXIT_OK
    assert main(["gen", "--k", "4", "--n", "5", "--seed", "3", "--out", str(b)]) == EXIT_OK
    assert a.read_text() == b.read_text()
    inst = loads(a.read_text())
    assert inst.k == 4 and inst.n == 5


def test_solve_reads_instance(tmp_path, capsys):
    path = tmp_path / "i.json"
    main(["gen", "--family", "ksum", "--k", "3", "--n", "6", "--seed", "2", "--out", str(path)])
    capsys.readouterr()
    assert main(["solve", "--solver", "naive", str(path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("decision ") and "sign_tests" in out


def test_exit_codes(tmp_path, capsys):
    assert main(["solve", "--solver", "magic"]) == EXIT_SOLVER
    assert main(["solve", "--bogus"]) == EXIT_PARSE
    assert main(["frobnicate"]) == EXIT_PARSE
    assert main(["solve", str(tmp_path / "missing.json")]) == EXIT_PARSE
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["solve", str(bad)]) == EXIT_PARSE
    # the plain k-SUM solver does not apply to a general polynomial
    assert main(["solve", "--solver", "mitm", "--family", "random", "--k", "3"]) == EXIT_PARSE


def test_verify_ok_and_failure(tmp_path, capsys, monkeypatch):
    assert main(["verify", "--solver", "kpol", "--k", "4", "--n", "3..4", "--seed", "0..1", "--n0", "4"]) == EXIT_OK
    assert "4/4 agree" in capsys.readouterr().out
    import kpol.cli as cli
    from kpol.baselines import NO, SolveResult
    from kpol.counters import SignTestCounter

    monkeypatch.setattr(cli, "run_solver", lambda name, inst, **kw: SolveResult(NO, None, SignTestCounter(), name))
    assert main(["verify", "--family", "planted", "--k", "3", "--n", "4", "--seed", "0..2"]) == EXIT_VERIFY


def test_bench_csv_and_fit(tmp_path, capsys):
    out, plot = tmp_path / "b.csv", tmp_path / "b.svg"
    code = main(
        ["bench", "--solver", "brute,mitm", "--family", "ksum-no", "--k", "4", "--n", "4,8,16", "--seed", "0",
         "--out", str(out), "--plot", str(plot), "--metric", "sign_tests"]
    )
    assert code == EXIT_OK
    rows = rows_from_csv(out.read_text())
    assert len(rows) == 6 and {r.solver for r in rows} == {"brute", "mitm"}
    err = capsys.readouterr().err
    assert "fit brute sign_tests exponent 4.000" in err
    assert plot.read_text().startswith("<svg")


def test_bench_fits_partial_sums():
    runs = run_bench(["mitm"], "ksum-no", 4, [4, 8, 16], [0])
    fits, series = bench_fits(runs, "partial_sums")
    assert fits["mitm"] == pytest.approx(2.0)
    assert [n for n, _ in series["mitm"]] == [4, 8, 16]


def test_exponents_output(capsys):
    assert main(["exponents"]) == EXIT_OK
    out = capsys.readouterr().out
    for text in ("kpol k=4 8/3", "kpol k=8 32/5", "main_term t=2 s=2 2/3 2/3", "main_term t=3 s=6 15/17 12/17",
                 "block k=4 3/8", "block k=5 13/59", "adt k=4 21/8", "adt k=5 210/59"):
        assert text in out
    assert main(["exponents", "--t", "3", "--s", "3"]) == EXIT_OK
    assert "main_term t=3 s=3 3/4 3/4" in capsys.readouterr().out
    assert exponent_table()[0] == "kpol k=4 8/3"
