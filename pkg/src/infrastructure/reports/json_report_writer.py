from pathlib import Path
import logging
from typing import Union

from src.application.dto.report_dto import VerificationReport

logger = logging.getLogger(__name__)


class JsonReportWriter:
    """検証レポートを JSON ファイルとして保存"""

    def __init__(self, indent: int = 2):
        self.indent = indent

    def render(self, report: VerificationReport) -> str:
        # 非有限値は "Infinity" / "-Infinity" / "NaN" 文字列になる
        return report.model_dump_json(indent=self.indent) + "\n"

    def write(self, report: VerificationReport, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(report), encoding="utf-8")
        logger.info(f"✅ レポートを書き出しました: {path}")
        return path
