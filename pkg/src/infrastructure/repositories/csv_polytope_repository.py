from pathlib import Path
import logging
from typing import Optional, Union

from src.domain.entities.polytope import Polytope
from src.domain.exceptions import DomainError, InputFileError
from src.domain.repositories.polytope_repository import PolytopeRepositoryInterface
from src.infrastructure.repositories import csv_format

logger = logging.getLogger(__name__)

NORMAL_TOLERANCE = 1e-9


class CsvPolytopeRepository(PolytopeRepositoryInterface):
    """`u1,…,un,area` 形式のファセットファイルと `x1,…,xn` 形式の頂点ファイル"""

    def load(self, path: Union[str, Path], vertices_path: Optional[Union[str, Path]] = None) -> Polytope:
        logger.info(f"🔍 多面体ファイル読み込み: {path}")
        n, rows, line_numbers = csv_format.read_rows(path, extra_columns=1)
        normals = rows[:, :n]
        areas = rows[:, n]
        csv_format.check_unit_rows(path, normals, line_numbers, NORMAL_TOLERANCE)
        csv_format.check_positive(path, areas, line_numbers, "area")

        vertices = None
        if vertices_path is not None:
            vertex_dimension, vertices, _ = csv_format.read_rows(vertices_path, extra_columns=0)
            if vertex_dimension != n:
                raise InputFileError(
                    f"vertex file dimension {vertex_dimension} does not match facet dimension {n}",
                    path=str(vertices_path),
                )
        try:
            polytope = Polytope(normals=normals, areas=areas, vertices=vertices)
        except DomainError as e:
            raise InputFileError(str(e), path=str(path)) from e
        logger.info(f"✅ 多面体を読み込みました: n={polytope.n}, facets={polytope.facet_count}")
        return polytope

    def save(
        self,
        polytope: Polytope,
        path: Union[str, Path],
        vertices_path: Optional[Union[str, Path]] = None,
    ) -> None:
        rows = [(*normal, area) for normal, area in zip(polytope.normals, polytope.areas)]
        csv_format.write_rows(path, polytope.n, rows)
        if vertices_path is not None:
            if polytope.vertices is None:
                raise DomainError("polytope has no vertices to write")
            csv_format.write_rows(vertices_path, polytope.n, polytope.vertices)
        logger.info(f"✅ 多面体を書き出しました: {path} ({polytope.facet_count} facets)")
