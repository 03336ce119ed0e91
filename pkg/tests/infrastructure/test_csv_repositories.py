import numpy as np
import pytest

from src.domain.entities.polytope import Polytope
from src.domain.exceptions import DomainError, InputFileError
from src.domain.services.measures import simplex_measure
from src.infrastructure.repositories.csv_measure_repository import CsvMeasureRepository
from src.infrastructure.repositories.csv_polytope_repository import CsvPolytopeRepository


def _write(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_measure_file_survives_save_and_load(tmp_path):
    repository = CsvMeasureRepository()
    path = tmp_path / "simplex.csv"
    measure = simplex_measure(3)

    repository.save(measure, path)
    loaded = repository.load(path)

    np.testing.assert_array_equal(loaded.directions, measure.directions)
    np.testing.assert_array_equal(loaded.weights, measure.weights)
    assert path.read_text(encoding="utf-8").startswith("# dim=3\n")


def test_measure_file_skips_blank_and_comment_lines(tmp_path):
    path = _write(tmp_path, "m.csv", "# dim=2\n\n1,0,1.0\n# second atom\n0,1,1.0\n")

    measure = CsvMeasureRepository().load(path)

    assert measure.size == 2


def test_missing_header_reports_line(tmp_path):
    path = _write(tmp_path, "m.csv", "1,0,0,1.0\n")

    with pytest.raises(InputFileError) as excinfo:
        CsvMeasureRepository().load(path)

    assert excinfo.value.line == 1


def test_wrong_column_count_reports_line(tmp_path):
    path = _write(tmp_path, "m.csv", "# dim=3\n1,0,0,1.0\n0,1,1.0\n")

    with pytest.raises(InputFileError) as excinfo:
        CsvMeasureRepository().load(path)

    assert excinfo.value.line == 3
    assert "expected 4 columns" in str(excinfo.value)


def test_non_unit_direction_reports_line(tmp_path):
    path = _write(tmp_path, "m.csv", "# dim=3\n1,0,0,1.0\n0,2,0,1.0\n")

    with pytest.raises(InputFileError) as excinfo:
        CsvMeasureRepository().load(path)

    assert excinfo.value.line == 3


def test_non_positive_weight_is_rejected(tmp_path):
    path = _write(tmp_path, "m.csv", "# dim=3\n1,0,0,-1.0\n")

    with pytest.raises(InputFileError):
        CsvMeasureRepository().load(path)


def test_non_numeric_value_is_rejected(tmp_path):
    path = _write(tmp_path, "m.csv", "# dim=3\n1,0,zero,1.0\n")

    with pytest.raises(InputFileError) as excinfo:
        CsvMeasureRepository().load(path)

    assert excinfo.value.line == 2


def test_missing_file_is_input_error(tmp_path):
    with pytest.raises(InputFileError):
        CsvMeasureRepository().load(tmp_path / "absent.csv")


def test_polytope_round_trip_with_vertices(tmp_path):
    repository = CsvPolytopeRepository()
    facets, vertices = tmp_path / "cube.csv", tmp_path / "cube_vertices.csv"

    repository.save(Polytope.cube(3), facets, vertices)
    loaded = repository.load(facets, vertices)

    assert loaded.facet_count == 6
    assert loaded.surface_area == pytest.approx(6.0)
    assert loaded.volume == pytest.approx(1.0)


def test_polytope_violating_minkowski_is_input_error(tmp_path):
    path = _write(tmp_path, "p.csv", "# dim=3\n1,0,0,1\n0,1,0,1\n0,0,1,1\n")

    with pytest.raises(InputFileError):
        CsvPolytopeRepository().load(path)


def test_vertex_dimension_mismatch(tmp_path):
    facets = tmp_path / "cube.csv"
    CsvPolytopeRepository().save(Polytope.cube(3), facets)
    vertices = _write(tmp_path, "v.csv", "# dim=2\n0,0\n1,0\n0,1\n")

    with pytest.raises(InputFileError):
        CsvPolytopeRepository().load(facets, vertices)


def test_save_vertices_without_vertices_fails(tmp_path):
    cube = Polytope.cube(3)
    bare = Polytope(normals=cube.normals, areas=cube.areas)

    with pytest.raises(DomainError):
        CsvPolytopeRepository().save(bare, tmp_path / "p.csv", tmp_path / "v.csv")
