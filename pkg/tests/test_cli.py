import json
from pathlib import Path

import pytest

from analysis_service import AnalysisService, parse_break
from errors import InputError
from main import run
from populate_models import canonical_models
from schemas import Report, report_schema

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def models():
    return canonical_models()


@pytest.fixture
def write_model(tmp_path, models):
    def write(name, model=None):
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(models[name] if model is None else model))
        return str(path)
    return write


def _run(capsys, *argv):
    code = run(["--quiet", *argv])
    out = capsys.readouterr().out
    return code, out


@pytest.mark.parametrize("name", ["identity", "jordan", "diagonal_symplectic"])
def test_info_matches_golden(name, models):
    raw = json.dumps(models[name]).encode()
    report = AnalysisService().info(raw).model_dump()
    assert report.pop("input_digest") == AnalysisService.digest(raw)
    golden = (GOLDEN / f"info_{name}.json").read_text()
    assert json.dumps(report, indent=2) + "\n" == golden


def test_validate_accepts_the_diagonal_model(capsys, write_model):
    code, out = _run(capsys, "validate", write_model("diagonal_symplectic"))
    report = json.loads(out)
    assert code == 0
    assert report["exit_code"] == 0
    names = [v["name"] for v in report["verdicts"]]
    for name in ("similitude", "kind", "form_unit", "dual_frobenius", "newton_symmetry",
                 "hodge_symmetry", "mazur", "frobenius_lattice_perp"):
        assert name in names


def test_validate_reports_a_broken_similitude(capsys, write_model, models):
    broken = dict(models["diagonal_symplectic"])
    broken["matrix"] = [[1, 0, 0, 0], [0, 3, 0, 0], [0, 0, 9, 0], [0, 0, 0, 9]]
    code, out = _run(capsys, "validate", write_model("broken", broken))
    assert code == 1
    failed = [v["name"] for v in json.loads(out)["verdicts"] if not v["passed"]]
    assert "similitude" in failed


def test_validate_reports_a_kind_mismatch(capsys, write_model, models):
    wrong_kind = dict(models["diagonal_symplectic"], kind="orthogonal")
    code, out = _run(capsys, "validate", write_model("wrong_kind", wrong_kind))
    assert code == 1
    failed = [v["name"] for v in json.loads(out)["verdicts"] if not v["passed"]]
    assert "kind" in failed


def test_validate_needs_a_self_dual_file(capsys, write_model):
    code, _ = _run(capsys, "validate", write_model("jordan"))
    assert code == 64


def test_decompose(capsys, write_model):
    code, out = _run(capsys, "decompose", write_model("diagonal_symplectic"), "--break", "1,0")
    report = json.loads(out)
    assert code == 0
    assert report["options"]["break"] == "1,0"
    assert report["data"]["hypothesis"]["is_break_on_newton"] is True
    assert report["achieved_precision"] > 0


def test_self_dual_decompose_with_probe(capsys, write_model):
    code, out = _run(capsys, "decompose", write_model("generated_symplectic"), "--break", "1,0",
                     "--self-dual", "--probe", "2")
    report = json.loads(out)
    assert code == 0, [v["name"] for v in report["verdicts"] if not v["passed"]]
    assert "uniqueness" in [v["name"] for v in report["verdicts"]]
    assert report["data"]["symmetric_break"] == [3, "3/1"]


def test_self_dual_decompose_rank_too_large(capsys, write_model):
    code, out = _run(capsys, "decompose", write_model("diagonal_symplectic"), "--break", "2,1", "--self-dual")
    assert code == 2
    assert json.loads(out)["verdicts"][-1]["name"] == "RankTooLarge"


def test_decompose_without_a_break(capsys, write_model):
    code, _ = _run(capsys, "decompose", write_model("jordan"), "--break", "1,1")
    assert code == 2


def test_decompose_at_low_precision_exits_with_precision_code(capsys, write_model):
    model = {"p": 2, "a": 1, "N": 8, "n": 3, "matrix": [[1, 1, 0], [0, 8, 1], [0, 0, 16]]}
    code, out = _run(capsys, "decompose", write_model("narrow", model), "--break", "1,0")
    report = json.loads(out)
    assert code == 3
    assert report["exit_code"] == 3
    assert report["verdicts"][-1]["name"] == "PrecisionExhausted"


def test_family(capsys, write_model):
    code, out = _run(capsys, "family", write_model("family"))
    report = json.loads(out)
    assert code == 2
    statuses = [f["status"] for f in report["data"]["fibers"]]
    assert statuses == ["decomposed", "decomposed", "hypothesis_violation"]


def test_generate_is_reproducible_and_validates(capsys, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    options = ["--quiet", "--seed", "3"]
    command = ["generate", "--p", "3", "--N", "32", "--n", "4", "--mu", "0,1,2,3"]
    assert run(options + ["--out", str(first)] + command) == 0
    assert run(options + ["--out", str(second)] + command) == 0
    assert first.read_bytes() == second.read_bytes()
    code, _ = _run(capsys, "validate", str(first))
    assert code == 0


def test_generate_rejects_invalid_exponents(capsys):
    assert run(["--quiet", "generate", "--p", "3", "--n", "4", "--mu", "0,2,1,3"]) == 64


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(["info"])
    assert exc.value.code == 64
    assert run(["--quiet", "info", str(tmp_path / "missing.json")]) == 64
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 3, "n": 2, "matrix": [[1, 0], [0, 1]], "colour": "blue"}')
    code, out = _run(capsys, "info", str(bad))
    assert code == 64
    assert json.loads(out)["verdicts"][0]["name"] == "InputError"


def test_schema(capsys):
    code, out = _run(capsys, "schema")
    assert code == 0
    schema = json.loads(out)
    assert set(schema["properties"]) == set(Report.model_fields)
    assert schema == report_schema()


def test_parse_break():
    assert parse_break("2,3/2")[1].denominator == 2
    with pytest.raises(InputError):
        parse_break("2")
