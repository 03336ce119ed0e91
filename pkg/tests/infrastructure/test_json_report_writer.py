import json
import math

from src.application.services.report_builder import ReportBuilder
from src.domain.value_objects.bound_check import BoundCheck
from src.infrastructure.reports.json_report_writer import JsonReportWriter


def _report():
    return ReportBuilder().build(
        suite_name="thm1",
        checks=[BoundCheck(name="thm1.n3.m000", value=0.35, lower=0.32, upper=0.40, error=1e-6)],
        tables={"thm1": {"n3": {"lower": 0.32}}},
        seeds=[7],
        resolutions={"n3": 48},
        timing_seconds=1.25,
    )


def test_writer_creates_parent_directories(tmp_path):
    path = JsonReportWriter().write(_report(), tmp_path / "nested" / "out.json")

    payload = json.loads(path.read_text(encoding="utf-8"))
    assert payload["schema_version"] == "1"
    assert payload["checks"][0]["name"] == "thm1.n3.m000"
    assert payload["resolutions"] == {"n3": 48}


def test_infinite_bounds_are_written_as_strings():
    text = JsonReportWriter().render(_report().model_copy(update={"checks": [
        ReportBuilder().entry(BoundCheck(name="open", value=1.0, lower=0.0))
    ]}))

    entry = json.loads(text)["checks"][0]
    assert entry["upper_bound"] == "Infinity"
    assert float(entry["upper_bound"]) == math.inf
