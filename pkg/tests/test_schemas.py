import json

import pytest
from pydantic import ValidationError as SchemaError

from pisigma.documents import recurrence_document, recurrence_from_document, tower_document
from pisigma.expr.parser import parse
from pisigma.expr.sumspec import ParamBound
from pisigma.pipeline.reduce import sigma_reduce
from pisigma.recurrences.creative import generate_recurrence
from pisigma.schemas import CliConfig, ParamDecl, RecurrenceDocument
from pisigma.verify import compare, points_table, verify_recurrence


def test_param_declarations():
    assert ParamDecl.parse("n") == ParamDecl(name="n", lower=0, upper=None)
    assert ParamDecl.parse("n:2:inf").lower == 2
    assert ParamDecl.parse("a:1:15").to_bound() == ParamBound("a", 1, 15)
    with pytest.raises(ValueError):
        ParamDecl.parse("n:3:1")
    with pytest.raises(ValueError):
        ParamDecl.parse("2n:0:inf")


def test_cli_config_validation():
    config = CliConfig(command="reduce", expression="S[1,n]", params=[ParamDecl(name="n")])
    assert config.bounds == [ParamBound("n")]
    with pytest.raises(SchemaError):
        CliConfig(command="simplify", expression="n")
    with pytest.raises(SchemaError):
        CliConfig(command="reduce", expression="n", window=0)
    with pytest.raises(SchemaError):
        CliConfig(command="reduce", expression="n", output_format="html")
    with pytest.raises(SchemaError):
        CliConfig(command="reduce", expression="n", params=[ParamDecl(name="n"), ParamDecl(name="n")])


def test_tower_document_lists_generators():
    result = sigma_reduce(parse("sum(k, 1, n, k!/(k+1)) + sum(k, 1, n, 1/k)"), "n")
    document = tower_document(result.tower, result.spec)
    assert document.var == "n"
    kinds = [g.kind for g in document.generators]
    assert len(kinds) == result.tower.size
    for g in document.generators:
        assert (g.ratio is None) != (g.summand is None)


def test_recurrence_document_round_trip():
    e = parse("sum(k, 0, n, k * binom(n, k))")
    recurrence = generate_recurrence(e.body, e.index, "n")
    document = recurrence_document(recurrence)
    restored = recurrence_from_document(RecurrenceDocument.model_validate_json(document.model_dump_json()))
    assert restored.coefficients == recurrence.coefficients
    assert restored.describe() == recurrence.describe()
    assert restored.validity == recurrence.validity
    assert verify_recurrence(restored).equal


def test_compare_collects_points():
    verdict, points = compare(parse("S[1,n]"), parse("S[2,n]"), "n", start=0, stop=4)
    assert not verdict.equal
    assert verdict.first_difference.point == 2
    assert len(points) == 5
    table = points_table(points)
    assert list(table["equal"]) == [True, True, False, False, False]


def test_compare_samples_parameters():
    verdict, points = compare(parse("binom(n,k)"), parse("binom(n,n-k)"), "k", [ParamBound("n", 3, 6)], 0, 3, 4)
    assert verdict.equal
    assert 1 <= verdict.samples <= 4
    assert {p.params["n"] for p in points} <= {3, 4, 5, 6}


def test_verdict_leads_with_identity_range_and_status():
    verdict, _ = compare(parse("S[1,n]"), parse("S[2,n]"), "n", start=0, stop=4)
    document = json.loads(verdict.model_dump_json())
    assert list(document)[:3] == ["identity", "range", "status"]
    assert document["identity"] == "S[1,n] = S[2,n]"
    assert document["range"] == "0:4"
    assert document["status"] == "different"


def test_all_pole_comparison_is_inconclusive():
    verdict, points = compare(parse("1/(n-n)"), parse("1/(n-n)"), "n", start=0, stop=3)
    assert verdict.status == "inconclusive"
    assert verdict.compared == 0
    assert not verdict.equal
    assert len(points) == 4


def test_cli_config_subcommand_options():
    config = CliConfig(command="eval", expression="binom(n,k)", at={"n": "4"}, value_range="0:4")
    assert config.at == {"n": 4}
    with pytest.raises(SchemaError):
        CliConfig(command="eval", expression="n", value_range="0..4")
    with pytest.raises(SchemaError):
        CliConfig(command="eval", expression="n", at={"n": "x"})
