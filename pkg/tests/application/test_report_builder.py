import math

from src.application.dto.report_dto import REPORT_SCHEMA_VERSION
from src.application.services.report_builder import ReportBuilder
from src.domain.value_objects.bound_check import BoundCheck


def _build(*checks: BoundCheck):
    return ReportBuilder().build(
        suite_name="constants",
        checks=list(checks),
        tables={"constants": {}},
        seeds=[7, 7, 3],
        resolutions={"n3": 48},
        timing_seconds=0.5,
    )


def test_entries_are_sorted_and_seeds_deduplicated():
    report = _build(BoundCheck(name="b", value=1.0, upper=2.0), BoundCheck(name="a", value=0.0, lower=-1.0))

    assert [entry.name for entry in report.checks] == ["a", "b"]
    assert report.seeds == [3, 7]
    assert report.schema_version == REPORT_SCHEMA_VERSION
    assert report.passed


def test_failed_check_fails_report():
    report = _build(BoundCheck(name="ok", value=1.0), BoundCheck(name="bad", value=3.0, upper=2.0, error=0.1))

    assert not report.passed
    assert [entry.name for entry in report.failed_checks] == ["bad"]


def test_error_bar_is_sigma_times_error():
    entry = ReportBuilder().entry(BoundCheck(name="x", value=1.0, upper=2.0, error=0.25, sigma_multiplier=4.0))

    assert entry.error_bar == 1.0
    assert entry.lower_bound == -math.inf


def test_recorded_check_does_not_affect_result():
    report = _build(BoundCheck.recorded("ratio", 12.0))

    assert report.passed
    assert report.checks[0].asserted is False
