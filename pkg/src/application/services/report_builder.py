import logging
import math
from typing import Any, Dict, Iterable, List

from src.application.dto.report_dto import CheckEntry, VerificationReport
from src.domain.value_objects.bound_check import BoundCheck

logger = logging.getLogger(__name__)


class ReportBuilder:
    """BoundCheck の列から VerificationReport を組み立てる"""

    def entry(self, check: BoundCheck) -> CheckEntry:
        error_bar = check.sigma_multiplier * check.error
        return CheckEntry(
            name=check.name,
            computed_value=check.value,
            lower_bound=check.lower,
            upper_bound=check.upper,
            error_bar=error_bar if math.isfinite(error_bar) else math.inf,
            passed=check.passed,
            asserted=check.asserted,
            provenance=check.provenance,
        )

    def build(
        self,
        suite_name: str,
        checks: Iterable[BoundCheck],
        tables: Dict[str, Any],
        seeds: List[int],
        resolutions: Dict[str, int],
        timing_seconds: float,
    ) -> VerificationReport:
        entries = []
        for check in checks:
            entry = self.entry(check)
            mark = "📊" if entry.passed else "❌"
            logger.info(
                f"{mark} {entry.name}: {entry.computed_value:.10g} "
                f"∈ [{entry.lower_bound:.6g}, {entry.upper_bound:.6g}] ± {entry.error_bar:.2g}"
            )
            entries.append(entry)

        report = VerificationReport.build(
            suite_name=suite_name,
            checks=entries,
            tables=tables,
            seeds=seeds,
            resolutions=resolutions,
            timing_seconds=timing_seconds,
        )
        if report.passed:
            logger.info(f"✅ スイート {suite_name}: {len(report.checks)} 項目すべて合格 ({timing_seconds:.1f}s)")
        else:
            logger.error(
                f"❌ スイート {suite_name}: {len(report.failed_checks)}/{len(report.checks)} 項目が不合格 ({timing_seconds:.1f}s)"
            )
        return report
