from dataclasses import dataclass
from typing import Optional

from src.application.services.geometry_query_service import GeometryQueryService
from src.application.services.report_builder import ReportBuilder
from src.application.services.verification_suite_service import VerificationSuiteService
from src.infrastructure.reports.json_report_writer import JsonReportWriter
from src.infrastructure.repositories.csv_measure_repository import CsvMeasureRepository
from src.infrastructure.repositories.csv_polytope_repository import CsvPolytopeRepository
from .config import Settings


@dataclass
class CliDependencies:
    settings: Settings
    measure_repository: CsvMeasureRepository
    polytope_repository: CsvPolytopeRepository
    report_writer: JsonReportWriter
    verification_service: VerificationSuiteService
    query_service: GeometryQueryService


def build_cli_dependencies(settings: Optional[Settings] = None) -> CliDependencies:
    settings = settings or Settings()

    measure_repository = CsvMeasureRepository()
    polytope_repository = CsvPolytopeRepository()
    report_writer = JsonReportWriter()

    verification_service = VerificationSuiteService(
        measure_repository=measure_repository,
        polytope_repository=polytope_repository,
        report_writer=report_writer,
        report_builder=ReportBuilder(),
    )
    query_service = GeometryQueryService(
        measure_repository=measure_repository,
        polytope_repository=polytope_repository,
    )

    return CliDependencies(
        settings=settings,
        measure_repository=measure_repository,
        polytope_repository=polytope_repository,
        report_writer=report_writer,
        verification_service=verification_service,
        query_service=query_service,
    )
