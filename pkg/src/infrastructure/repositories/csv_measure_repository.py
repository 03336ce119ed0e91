from pathlib import Path
import logging
from typing import Union

from src.domain.entities.spherical_measure import UNIT_NORM_TOLERANCE, SphericalMeasure
from src.domain.exceptions import DomainError, InputFileError
from src.domain.repositories.measure_repository import MeasureRepositoryInterface
from src.infrastructure.repositories import csv_format

logger = logging.getLogger(__name__)


class CsvMeasureRepository(MeasureRepositoryInterface):
    """`u1,…,un,weight` 形式（ヘッダ `# dim=n`）の測度ファイルリポジトリ"""

    def load(self, path: Union[str, Path]) -> SphericalMeasure:
        logger.info(f"🔍 測度ファイル読み込み: {path}")
        n, rows, line_numbers = csv_format.read_rows(path, extra_columns=1)
        directions = rows[:, :n]
        weights = rows[:, n]
        csv_format.check_unit_rows(path, directions, line_numbers, UNIT_NORM_TOLERANCE)
        csv_format.check_positive(path, weights, line_numbers, "weight")
        try:
            # 行をそのまま保持する（書き戻しで同じバイト列になるよう統合しない）
            measure = SphericalMeasure.from_atoms(directions, weights, merge=False)
        except DomainError as e:
            raise InputFileError(str(e), path=str(path)) from e
        logger.info(f"✅ 測度を読み込みました: n={measure.n}, atoms={measure.size}, mass={measure.mass:.12g}")
        return measure

    def save(self, measure: SphericalMeasure, path: Union[str, Path]) -> None:
        rows = [(*direction, weight) for direction, weight in zip(measure.directions, measure.weights)]
        csv_format.write_rows(path, measure.n, rows)
        logger.info(f"✅ 測度を書き出しました: {path} ({measure.size} atoms)")
