import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from coverage_depth.cli import golden_text, main, round_half_up, significant
from coverage_depth.expectation import GeneratorMatrix, all_expected_samples, t_ave
from coverage_depth.gf import field_new

EXAMPLE = "# two strands, five columns\n2 2 5\n1 0 1 0 1\n0 1 0 1 1\n"
IDENTITY = "2 3 3\n1 0 0\n0 1 0\n0 0 1\n"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def record(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def frac(v):
    return Fraction(v["num"], v["den"])


def strip_timing(rec):
    rec = dict(rec)
    rec.pop("timing")
    return rec


def test_expect_example_all(tmp_path, capsys):
    rec = record(capsys, "expect", write(tmp_path, "g.txt", EXAMPLE), "--all")
    assert rec["schema"] == "coverage-depth/1"
    assert [frac(v) for v in rec["result"]["expectations"]] == [Fraction(23, 12)] * 2
    assert frac(rec["result"]["t_max"]) == Fraction(23, 12)
    assert rec["result"]["t_max"]["decimal"] == "1.91666666667"


def test_expect_round_trip_matches_library(tmp_path, capsys):
    text = "3 3 6\n1 0 0 1 2 1\n0 1 0 1 1 0\n0 0 1 0 1 2\n"
    rec = record(capsys, "expect", write(tmp_path, "g.txt", text), "--all")
    G = GeneratorMatrix.from_rows(field_new(3), [[1, 0, 0, 1, 2, 1], [0, 1, 0, 1, 1, 0], [0, 0, 1, 0, 1, 2]])
    assert [frac(v) for v in rec["result"]["expectations"]] == all_expected_samples(G)
    assert frac(rec["result"]["t_ave"]) == t_ave(G)


def test_expect_identity(tmp_path, capsys):
    rec = record(capsys, "expect", write(tmp_path, "i.txt", IDENTITY), "--all")
    assert [frac(v) for v in rec["result"]["expectations"]] == [3, 3, 3]


def test_expect_single_index_and_csv(tmp_path, capsys):
    path = write(tmp_path, "g.txt", EXAMPLE)
    rec = record(capsys, "expect", path, "--index", "2")
    assert frac(rec["result"]["value"]) == Fraction(23, 12)
    code, out, _ = run(capsys, "expect", path, "--all", "--format", "csv")
    assert code == 0
    assert out.splitlines() == [
        "index,num,den,decimal",
        "1,23,12,1.91666666667",
        "2,23,12,1.91666666667",
        "t_max,23,12,1.91666666667",
        "t_ave,23,12,1.91666666667",
    ]


def test_expect_extension_field(tmp_path, capsys):
    # GF(4) elements in base-2 encoding: 2 is the generator x, 3 is x + 1
    rec = record(capsys, "expect", write(tmp_path, "g.txt", "4 2 3\n1 0 1\n0 1 2\n"), "--all")
    G = GeneratorMatrix.from_rows(field_new(4), [[1, 0, 1], [0, 1, 2]])
    assert [frac(v) for v in rec["result"]["expectations"]] == all_expected_samples(G)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty"),
        ("2 2\n1 0\n0 1\n", "header"),
        ("2 2 2\n1 0\n", "expected 2 rows"),
        ("2 2 2\n1 0 1\n0 1\n", "expected 2 entries"),
        ("2 2 2\n1 0\n0 2\n", "outside"),
        ("2 2 2\n1 a\n0 1\n", "integers"),
        ("6 2 2\n1 0\n0 1\n", "prime power"),
    ],
)
def test_parse_errors_exit_2(tmp_path, capsys, text, fragment):
    code, out, err = run(capsys, "expect", write(tmp_path, "bad.txt", text), "--all")
    assert code == 2
    assert out == ""
    assert fragment in err


def test_missing_file_exit_2(tmp_path, capsys):
    code, out, _ = run(capsys, "expect", str(tmp_path / "nope.txt"), "--all")
    assert code == 2 and out == ""


def test_rank_deficient_exit_3(tmp_path, capsys):
    code, out, err = run(capsys, "expect", write(tmp_path, "r.txt", "3 2 3\n1 2 1\n2 1 2\n"), "--all")
    assert code == 3 and out == ""
    assert "hyperplane" in err and "[1, 1]" in err


def test_zero_column_exit_3(tmp_path, capsys):
    code, _, err = run(capsys, "expect", write(tmp_path, "z.txt", "2 2 3\n1 0 0\n0 1 0\n"), "--all")
    assert code == 3
    assert "column 3" in err


def test_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["search", "--q", "2"])
    assert err.value.code == 2


@pytest.mark.parametrize("n, objective, value", [(5, "max", Fraction(37, 12)), (8, "ave", Fraction(299, 105))])
def test_search(capsys, n, objective, value):
    rec = record(capsys, "search", "--q", "2", "--n", str(n), "--k", "3", "--objective", objective)
    assert frac(rec["result"]["value"]) == value
    assert sum(rec["result"]["counts"]) == n
    assert sum(frac(w["weight"]) for w in rec["result"]["witness"]) == 1


def test_search_jobs_identical(capsys):
    a = record(capsys, "search", "--q", "2", "--n", "8", "--k", "3", "--objective", "ave", "--jobs", "1")
    b = record(capsys, "search", "--q", "2", "--n", "8", "--k", "3", "--objective", "ave", "--jobs", "8")
    assert json.dumps(strip_timing(a)) == json.dumps(strip_timing(b))


def test_search_too_large_exit_4(capsys):
    code, out, _ = run(capsys, "search", "--q", "5", "--n", "40", "--k", "4")
    assert code == 4 and out == ""


def test_search_bad_q_exit_5(capsys):
    assert run(capsys, "search", "--q", "6", "--n", "4", "--k", "3")[0] == 5


def test_bounds_lower(capsys):
    rec = record(capsys, "bounds", "--lower", "--n", "105", "--k", "100", "--method", "theorem2")
    assert round_half_up(frac(rec["result"]["value"]), 2) == "89.79"
    assert len(rec["result"]["per_r"]) == 100
    rec = record(capsys, "bounds", "--lower", "--n", "4", "--k", "3", "--method", "prior")
    assert frac(rec["result"]["value"]) == Fraction(23, 9)
    rec = record(capsys, "bounds", "--lower", "--n", "4", "--k", "3", "--method", "simple")
    assert frac(rec["result"]["value"]) == Fraction(8, 3)
    rec = record(capsys, "bounds", "--lower", "--n", "102", "--k", "100", "--method", "gap")
    assert frac(rec["result"]["value"]) > 0


def test_bounds_upper(capsys):
    rec = record(capsys, "bounds", "--upper", "--q", "3", "--k", "3", "--method", "optimize")
    assert float(frac(rec["result"]["value"])) <= 2.7240 + 1e-3
    assert rec["result"]["verified"] is True
    rec = record(capsys, "bounds", "--upper", "--q", "2", "--method", "eval-k3", "--weights", "1/3,0,0")
    assert frac(rec["result"]["value"]) == 3
    rec = record(capsys, "bounds", "--upper", "--q", "2", "--k", "4", "--method", "symmetric", "--weights", "1/4,0,0,0")
    assert frac(rec["result"]["value"]) == 4
    rec = record(capsys, "bounds", "--upper", "--method", "asymptotic", "--lam", "0.06679", "--mu", "0.1509")
    assert float(frac(rec["result"]["value"])) < 2.6433


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "--lower", "--n", "3", "--k", "3", "--method", "theorem2"],
        ["bounds", "--lower", "--method", "prior"],
        ["bounds", "--upper", "--q", "2", "--method", "eval-k3", "--weights", "0.5,0.5,0.5"],
        ["bounds", "--upper", "--q", "2", "--method", "eval-k3", "--weights", "0,1/3,0"],
        ["bounds", "--upper", "--q", "2", "--k", "5", "--method", "optimize"],
        ["bounds", "--lower", "--n", "5", "--k", "3", "--method", "optimize"],
    ],
)
def test_bounds_infeasible_exit_5(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 5 and out == "" and err.startswith("error:")


@pytest.mark.slow
def test_simulate_example(tmp_path, capsys):
    path = write(tmp_path, "g.txt", EXAMPLE)
    rec = record(capsys, "simulate", path, "--index", "1", "--trials", "100000", "--seed", "7")
    assert frac(rec["result"]["exact"]) == Fraction(23, 12)
    assert abs(rec["result"]["z"]) <= 4


def test_simulate_identity_and_repeatability(tmp_path, capsys):
    path = write(tmp_path, "i.txt", IDENTITY)
    a = record(capsys, "simulate", path, "--index", "2", "--trials", "3000", "--seed", "3")
    b = record(capsys, "simulate", path, "--index", "2", "--trials", "3000", "--seed", "3")
    assert strip_timing(a) == strip_timing(b)
    assert abs(a["result"]["z"]) <= 4


def test_simulate_rank_deficient_exit_3(tmp_path, capsys):
    path = write(tmp_path, "r.txt", "2 2 2\n1 1\n0 0\n")
    assert run(capsys, "simulate", path, "--index", "1", "--trials", "10")[0] == 3


def test_reproduce_matches_golden(tmp_path, capsys):
    rec = record(capsys, "reproduce", "--out", str(tmp_path))
    files = rec["result"]["files"]
    assert set(files) == {"search_q2_k3.csv", "upper_k3.csv", "lower_k100.csv"}
    for name, info in files.items():
        assert info["matches_golden"], name
        assert Path(info["path"]).read_text() == golden_text(name)


def test_golden_tables_agree_with_reference_values():
    import csv
    import io

    rows = list(csv.DictReader(io.StringIO(golden_text("search_q2_k3.csv"))))
    values = {(int(r["n"]), r["objective"]): Fraction(int(r["num"]), int(r["den"])) for r in rows}
    assert values[(5, "max")] == Fraction(37, 12) and values[(8, "ave")] == Fraction(299, 105)
    rows = list(csv.DictReader(io.StringIO(golden_text("lower_k100.csv"))))
    assert [(r["bound"], r["prior"]) for r in rows] == [
        ("100.00", "96.76"), ("95.28", "94.44"), ("93.03", "92.55"), ("91.28", "90.92"), ("89.79", "89.50"),
    ]
    rows = list(csv.DictReader(io.StringIO(golden_text("upper_k3.csv"))))
    reported = {2: 2.7789, 3: 2.7240, 4: 2.7006, 5: 2.6878, 7: 2.6742, 8: 2.6702}
    for r in rows:
        q = int(r["q"])
        assert abs(float(r["t_max_ref"]) - reported[q]) <= 2e-3
        assert float(r["t_max_opt"]) <= reported[q] + 1e-3


@pytest.mark.parametrize(
    "x, places, expected",
    [(Fraction(1, 8), 2, "0.13"), (Fraction(-1, 8), 2, "-0.13"), (Fraction(1, 3), 0, "0"), (Fraction(5, 2), 0, "3"), (2.675, 2, "2.67"), (Fraction(-1, 1000), 2, "0.00")],
)
def test_round_half_up(x, places, expected):
    # 2.675 is stored as 2.67499999..., so it rounds down
    assert round_half_up(x, places) == expected


@pytest.mark.parametrize(
    "x, expected",
    [(Fraction(23, 12), "1.91666666667"), (Fraction(2, 3), "0.666666666667"), (Fraction(100), "100"), (Fraction(1, 8), "0.125"), (Fraction(-5, 9), "-0.555555555556")],
)
def test_significant(x, expected):
    assert significant(x) == expected


def test_console_script_stdout_is_pure_json(tmp_path):
    path = write(tmp_path, "g.txt", EXAMPLE)
    proc = subprocess.run(
        [sys.executable, "-m", "coverage_depth.cli", "expect", path, "--index", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stderr == ""
    assert frac(json.loads(proc.stdout)["result"]["value"]) == Fraction(23, 12)
