import json

import pytest

from pisigma.cli import build_parser, main, run
from pisigma.evaluation.oracle import SeqOracle, germ_equal
from pisigma.expr.parser import parse
from pisigma.schemas import CliConfig


@pytest.fixture(autouse=True)
def log_to_tmp(tmp_path, monkeypatch):
    monkeypatch.setenv("PISIGMA_LOG_FILE", str(tmp_path / "pisigma.log"))


def _lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


def test_parser_defaults():
    args = build_parser().parse_args(["reduce", "S[1,n]"])
    assert args.command == "reduce"
    assert args.format == "plain"
    assert args.param == []
    assert not args.no_verify


def test_eval_prints_exact_values(capsys):
    assert main(["eval", "S[1,n]", "--range", "1:3"]) == 0
    assert _lines(capsys) == ["1\t1", "2\t3/2", "3\t11/6"]


def test_eval_with_parameter_values(capsys):
    assert main(["eval", "binom(n,k)", "--var", "k", "--at", "n=4", "--range", "0:4"]) == 0
    assert [line.split("\t")[1] for line in _lines(capsys)] == ["1", "4", "6", "4", "1"]


def test_eval_marks_poles(capsys):
    assert main(["eval", "1/(n-1)", "--range", "0:2"]) == 0
    assert "undefined" in _lines(capsys)[1]


def _verdict(lines):
    """The JSON verdict that follows the per-point lines"""
    begin = lines.index("{")
    return lines[:begin], json.loads("\n".join(lines[begin:]))


def test_verify_reports_first_difference(capsys):
    assert main(["verify", "--lhs", "S[1,n]", "--rhs", "S[2,n]", "--range", "0:5"]) == 1
    points, verdict = _verdict(_lines(capsys))
    assert points[:3] == ["n=0: 0 = 0", "n=1: 1 = 1", "n=2: 3/2 != 5/4"]
    assert len(points) == 6
    assert verdict["status"] == "different"
    assert verdict["range"] == "0:5"
    assert verdict["identity"] == "S[1,n] = S[2,n]"
    assert verdict["first_difference"]["point"] == 2


def test_verify_equal_sides(capsys, tmp_path):
    table = tmp_path / "points.csv"
    code = main(
        ["verify", "--lhs", "sum(k,1,n,1/(k*(k+1)))", "--rhs", "1 - 1/(n+1)", "--range", "0:8", "--table", str(table)]
    )
    assert code == 0
    points, verdict = _verdict(_lines(capsys))
    assert len(points) == 9
    assert all(" = " in line for line in points)
    assert verdict["status"] == "equal"
    assert verdict["compared"] == 9
    assert table.read_text().splitlines()[0].startswith("point")


def test_verify_all_poles_is_not_equal(capsys):
    assert main(["verify", "--lhs", "1/(n-n)", "--rhs", "0", "--range", "0:3"]) == 1
    points, verdict = _verdict(_lines(capsys))
    assert points == ["n=0: pole", "n=1: pole", "n=2: pole", "n=3: pole"]
    assert verdict["status"] == "inconclusive"
    assert verdict["compared"] == 0


def test_run_takes_a_validated_config(capsys):
    config = CliConfig(command="eval", expression="binom(n,k)", var="k", at={"n": 3}, value_range="0:3")
    assert run(config) == 0
    assert [line.split("\t")[1] for line in _lines(capsys)] == ["1", "3", "3", "1"]


def test_reduce_output_reads_back(capsys):
    assert main(["reduce", "sum(k,1,n,1/(k*(k+1)))"]) == 0
    (line,) = _lines(capsys)
    assert germ_equal(SeqOracle(), parse(line), parse("1 - 1/(n+1)"), 0, 12, var="n")


def test_reduce_json_document(capsys, tmp_path):
    target = tmp_path / "result.json"
    assert main(["reduce", "sum(k,1,n,1/k)", "--format", "json", "--emit-json", str(target)]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["command"] == "reduce"
    assert printed["var"] == "n"
    assert printed["verified"] is True
    assert json.loads(target.read_text()) == printed


def test_recurrence_document_re_verifies(capsys, tmp_path):
    target = tmp_path / "rec.json"
    assert main(["rec", "sum(k,0,n,binom(n,k))", "--emit-json", str(target)]) == 0
    capsys.readouterr()
    document = json.loads(target.read_text())
    assert document["order"] == 1
    assert document["certificate"]["index"] == "k"
    assert main(["verify", "--certificate", str(target)]) == 0
    points, verdict = _verdict(_lines(capsys))
    assert points == []
    assert verdict["status"] == "equal"


def test_solve_rec_fits_the_definite_sum(capsys):
    assert main(["solve-rec", "sum(k,0,n,binom(n,k))"]) == 0
    (line,) = _lines(capsys)
    result = parse(line)
    assert germ_equal(SeqOracle(), result, parse("sum(k,0,n,binom(n,k))"), 3, 12, var="n")


def test_ems_failure_document(capsys):
    assert main(["ems", "sum(k,1,infinity,1/k^2)", "--format", "json"]) == 4
    document = json.loads(capsys.readouterr().out)
    assert document["step"] == "validate"
    assert document["exit_code"] == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "n + $"],
        ["reduce"],
        ["reduce", "S[1,n]", "--param", "n:5:1"],
        ["reduce", "S[1,n]", "--param", "n:0"],
        ["eval", "S[1,n]", "--range", "5:1"],
        ["reduce", "binom(n,a)"],
        ["eval", "binom(n,k)", "--var", "k", "--at", "n"],
        ["eval", "binom(n,k)", "--var", "k", "--at", "n=x"],
    ],
)
def test_invalid_input_exits_with_code_4(argv, capsys):
    assert main(argv) == 4
    assert capsys.readouterr().err.startswith("error:")


def test_missing_recurrence_exits_with_code_2(capsys):
    assert main(["rec", "sum(k,0,n,binom(n,k))", "--dmax", "0"]) == 2
