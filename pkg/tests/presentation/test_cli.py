import json
from dataclasses import replace

from src.application.dto.report_dto import CheckEntry, VerificationReport
from src.domain.services.measures import cross_measure
from src.infrastructure.repositories.csv_measure_repository import CsvMeasureRepository
from src.presentation.cli.commands import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, build_parser, run
from src.presentation.cli.config import Settings
from src.presentation.cli.context import build_cli_dependencies


def _dependencies(**overrides):
    values = dict(resolution=24, high_dim_resolution=8, samples=2_000, suite_measures=2, corpus_size=2, max_workers=1)
    values.update(overrides)
    return build_cli_dependencies(Settings(_env_file=None, **values))


class _FailingVerificationService:
    def run_suite(self, config):
        entry = CheckEntry(
            name="thm1.n3.m000", computed_value=2.0, lower_bound=0.0, upper_bound=1.0, error_bar=0.0, passed=False
        )
        return VerificationReport.build(config.suite, [entry], {}, [config.seed], {}, 0.0)


def test_constants_prints_json(capsys):
    code = run(["constants", "--n", "3"], _dependencies())

    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["n"] == 3
    assert len(payload["volume_bounds"]) == 2


def test_verify_writes_report(tmp_path, capsys):
    out = tmp_path / "constants.json"

    code = run(["verify", "constants", "--n", "3", "--out", str(out)], _dependencies())

    assert code == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["suite_name"] == "constants"
    assert capsys.readouterr().out.startswith("PASS constants")


def test_verify_failure_exit_code(tmp_path, capsys):
    dependencies = replace(_dependencies(), verification_service=_FailingVerificationService())

    code = run(["verify", "thm1", "--out", str(tmp_path / "r.json")], dependencies)

    assert code == EXIT_CHECK_FAILED
    assert "failed: thm1.n3.m000" in capsys.readouterr().out


def test_missing_measure_file_is_input_error(tmp_path, capsys):
    code = run(["volume", "--measure", str(tmp_path / "absent.csv")], _dependencies())

    assert code == EXIT_INPUT_ERROR
    assert "error:" in capsys.readouterr().err


def test_malformed_measure_file_is_input_error(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# dim=3\n1,0,0\n", encoding="utf-8")

    assert run(["transform", "--measure", str(path), "--direction", "0", "0", "1"], _dependencies()) == EXIT_INPUT_ERROR


def test_transform_prints_value(tmp_path, capsys):
    path = tmp_path / "cross.csv"
    CsvMeasureRepository().save(cross_measure(3), path)

    code = run(["transform", "--measure", str(path), "--direction", "1", "0", "0", "--kernel", "cosine"], _dependencies())

    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == 1.0


def test_invalid_dimension_list_is_input_error(tmp_path):
    code = run(["verify", "constants", "--n", "2", "--out", str(tmp_path / "r.json")], _dependencies())

    assert code == EXIT_INPUT_ERROR


def test_count_flag_sets_both_corpus_sizes():
    args = build_parser().parse_args(["verify", "tomography", "--count", "5"])

    assert args.count == 5
    assert args.n_values is None
