import math

import numpy as np
import pytest

from src.application.services.geometry_query_service import GeometryQueryService
from src.domain.entities.polytope import Polytope
from src.domain.exceptions import ConfigurationError, DomainError
from src.domain.services.measures import cross_measure, simplex_measure
from src.infrastructure.repositories.csv_measure_repository import CsvMeasureRepository
from src.infrastructure.repositories.csv_polytope_repository import CsvPolytopeRepository


def _service() -> GeometryQueryService:
    return GeometryQueryService(CsvMeasureRepository(), CsvPolytopeRepository())


def _measure_file(tmp_path, measure=None):
    path = tmp_path / "measure.csv"
    CsvMeasureRepository().save(measure or cross_measure(3), path)
    return str(path)


def test_constants_summary_includes_bounds():
    summary = _service().constants_summary(3)

    assert summary["gamma"] == pytest.approx(3.0 * math.pi / 4.0)
    lower, upper = summary["polar_volume_bounds"]
    assert lower < upper


def test_cosine_volume_of_cross_is_cube_volume(tmp_path):
    result = _service().measure_volume(_measure_file(tmp_path), kernel="cosine", resolution=24)

    assert result["volume"] == pytest.approx(8.0, rel=0.02)
    # polar of the cube [-1, 1]^3 is the cross-polytope of volume 4/3
    assert result["polar_volume"] == pytest.approx(4.0 / 3.0, rel=0.02)
    assert result["isotropy_defect"] < 1e-12


def test_volume_of_non_even_measure_uses_evenized_body(tmp_path):
    result = _service().measure_volume(_measure_file(tmp_path, simplex_measure(3)), resolution=24)

    assert result["kernel"] == "sine"
    assert result["volume"] > 0.0


def test_unknown_volume_method_is_configuration_error(tmp_path):
    with pytest.raises(ConfigurationError):
        _service().measure_volume(_measure_file(tmp_path), method="voxels")


def test_sine_transform_of_cross_at_axis(tmp_path):
    result = _service().measure_transform(_measure_file(tmp_path), [0.0, 0.0, 2.0])

    # atoms ±e₁, ±e₂ carry weight ½ and see |x|u^⊥| = 2
    assert result["value"] == pytest.approx(4.0)


def test_transform_rejects_wrong_dimension(tmp_path):
    with pytest.raises(DomainError):
        _service().measure_transform(_measure_file(tmp_path), [1.0, 0.0])


def test_position_polytope_from_file(tmp_path):
    facets = tmp_path / "facets.csv"
    sheared = Polytope.cube(3).transformed(np.array([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))
    CsvPolytopeRepository().save(sheared, facets)

    summary = _service().position_polytope(str(facets))

    assert summary["converged"]
    assert summary["surface_area"] == pytest.approx(6.0, rel=1e-6)
    assert summary["initial_surface_area"] > summary["surface_area"]
