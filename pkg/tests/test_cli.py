import json

import pytest
from click.testing import CliRunner

from jordancr.cli import dumps, load_points, main
from jordancr.algebra import parse_algebra


@pytest.fixture
def runner():
    return CliRunner()


def _json(result):
    return json.loads(result.stdout.splitlines()[0])


def test_algebra_info(runner):
    res = runner.invoke(main, ["algebra", "info", "--algebra", "sym3"])
    assert res.exit_code == 0
    rec = _json(res)
    assert (rec["kind"], rec["rank"], rec["dim"]) == ("Sym", 3, 6)
    assert rec["schema"] == 1 and rec["command"] == "algebra info"


def test_crossratio_rank_one(runner):
    res = runner.invoke(main, ["crossratio", "--algebra", "r", "--points", "[-1, \"-1j\", 1, \"1j\"]"])
    assert res.exit_code == 0, res.output
    rec = _json(res)
    assert rec["B"] == pytest.approx(-1) and rec["class"] == "Negative"


def test_maslov_and_transversal(runner):
    res = runner.invoke(main, ["maslov", "--algebra", "sym2", "--points", "[\"e\", \"-ie\", \"-e\"]"])
    assert res.exit_code == 0, res.output
    assert _json(res)["maslov"] in (2, -2)
    res = runner.invoke(main, ["transversal", "--algebra", "r", "--points", "[1, 1]"])
    assert res.exit_code == 0 and _json(res)["transversal"] is False


@pytest.mark.parametrize("args", [
    ["algebra", "info", "--algebra", "sym0"],
    ["crossratio", "--algebra", "r", "--points", "[1, 2"],
    ["crossratio", "--algebra", "r", "--points", "[1, 2, 3]"],
    ["suite", "cocycle", "--algebra", "r"],
    ["suite", "range", "--algebra", "r", "--seed", "1", "--tol", "1e-3"],
    ["suite", "product", "--algebra", "r", "--seed", "1"],
])
def test_parse_errors(runner, args):
    assert runner.invoke(main, args).exit_code == 2


def test_precondition_error(runner):
    # a = b is outside the domain of the cross ratio
    res = runner.invoke(main, ["crossratio", "--algebra", "r", "--points", "[1, 1, -1, \"1j\"]"])
    assert res.exit_code == 3


def test_suite_deterministic_and_csv(runner, tmp_path):
    args = ["suite", "cocycle", "--algebra", "sym2", "--seed", "7", "--n", "50"]
    a = runner.invoke(main, args)
    b = runner.invoke(main, args)
    assert a.exit_code == 0 and a.stdout == b.stdout
    assert _json(a)["passed"] is True
    out = tmp_path / "rep.csv"
    res = runner.invoke(main, args + ["--format", "csv", "--out", str(out)])
    assert res.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("check,") and len(lines) == 5


def test_suite_reports_failure(runner):
    res = runner.invoke(main, ["suite", "cocycle", "--algebra", "sym2", "--seed", "3", "--n", "30", "--tol", "0"])
    assert res.exit_code == 1


def test_fuchsian_jsonl(runner, tmp_path):
    out = tmp_path / "run.jsonl"
    res = runner.invoke(main, ["fuchsian", "run", "--maxlen", "2", "--out", str(out)])
    lines = out.read_text().splitlines()
    head = json.loads(lines[0])
    assert head["command"] == "fuchsian run" and set(head["passed"]) >= {"power_law", "vtl_identity"}
    assert len(lines) == 1 + 8 + 56
    assert res.exit_code == (0 if head["all_passed"] else 1)
    assert (tmp_path / "run.csv").exists()


def test_point_parsing():
    V = parse_algebra("sym2")
    e, mie, h = load_points(V, "[\"e\", \"-ie\", \"0.5e\"]", 3)
    assert e == pytest.approx(V.unit()) and mie == pytest.approx(-1j * V.unit())
    assert h == pytest.approx(0.5 * V.unit())


def test_dumps_nan_and_precision():
    s = dumps({"x": float("nan"), "y": 0.1})
    assert json.loads(s) == {"x": None, "y": 0.1}
