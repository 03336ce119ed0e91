import math

import numpy as np
import pytest
from scipy.stats import special_ortho_group

from src.domain.entities.polytope import Polytope
from src.domain.exceptions import UnsupportedDimensionError
from src.domain.services.measures import isotropy_defect
from src.domain.services.numerics import build_sphere_quadrature
from src.domain.services.tomography import (
    ball_polytope,
    ball_tomography_values,
    identity_suite,
    isoperimetric_ratio,
    polytope_tomography_values,
    projection_body,
    psi_body,
    psi_constant,
    random_symmetric_polytope,
    surface_measure,
    tomography_checks,
    tomography_suite,
    zonotope_polar_volume,
    zonotope_volume,
)


def _quadrature():
    return build_sphere_quadrature(3, 24)


def _sheared_cube() -> Polytope:
    return Polytope.cube(3).transformed(np.array([[1.0, 0.6, 0.0], [0.0, 1.0, 0.4], [0.0, 0.0, 1.0]]))


def test_surface_measure_of_cube_is_isotropic():
    mu = surface_measure(Polytope.cube(3))

    assert mu.mass == pytest.approx(3.0)
    assert isotropy_defect(mu) < 1e-12


def test_projection_body_of_cube_is_doubled_cube():
    body = projection_body(Polytope.cube(3))

    assert body.h(np.array([1.0, 0.0, 0.0])) == pytest.approx(1.0)
    assert body.h(np.array([1.0, 1.0, 1.0])) == pytest.approx(3.0)


def test_psi_constant_at_three_is_one_over_pi():
    assert psi_constant(3) == pytest.approx(1.0 / math.pi)


def test_psi_body_support_is_weighted_sine_transform():
    cube = Polytope.cube(3)
    v = np.array([0.0, 0.0, 1.0])

    # faces ±e₁, ±e₂ contribute |v|e_i^⊥| = 1, faces ±e₃ contribute 0
    assert psi_body(cube).h(v) == pytest.approx(4.0 / math.pi)


def test_zonotope_volume_of_cube_generators():
    cube = Polytope.cube(3)

    assert zonotope_volume(cube.areas[:, None] * cube.normals) == pytest.approx(8.0)


def test_cube_analytic_values():
    values = polytope_tomography_values(Polytope.cube(3), _quadrature())

    assert values.surface == pytest.approx(6.0)
    assert values.volume == pytest.approx(1.0)
    assert values.projection / values.surface ** 3 == pytest.approx(1.0 / 27.0, rel=1e-9)
    assert values.polar_projection * values.surface ** 3 == pytest.approx(288.0, rel=1e-9)


def test_ball_closed_forms_and_projection_equals_psi():
    values = ball_tomography_values(3)
    surface_cubed = values.surface ** 3

    assert values.polar_projection * surface_cubed == pytest.approx(256.0 * math.pi / 3.0, rel=1e-9)
    assert values.projection / surface_cubed == pytest.approx(math.pi / 48.0, rel=1e-9)
    assert values.psi == pytest.approx(values.projection, rel=1e-9)
    assert values.polar_psi == pytest.approx(values.polar_projection, rel=1e-9)


def test_ball_attains_projection_upper_bound():
    checks = {check.name.split(".")[-1]: check for check in tomography_checks(ball_tomography_values(3), "ball")}

    assert all(check.passed for check in checks.values())
    assert checks["projection_over_surface"].value == pytest.approx(checks["projection_over_surface"].upper, rel=1e-9)


def test_isoperimetric_ratio_of_cube():
    assert isoperimetric_ratio(Polytope.cube(3)) == pytest.approx(6.0 / math.pi)


def test_cube_passes_every_tomography_check():
    checks = tomography_checks(polytope_tomography_values(Polytope.cube(3), _quadrature()), "cube")

    failed = [check.name for check in checks if not check.passed]
    assert failed == []


def test_tomography_suite_positions_sheared_cube():
    report = tomography_suite(_sheared_cube(), _quadrature(), label="sheared")

    assert report.passed
    assert report.position.defect < 1e-6
    assert report.values.surface == pytest.approx(6.0, rel=1e-6)
    assert any(check.name == "sheared.position_defect" for check in report.checks)


def test_random_corpus_bodies_pass_tomography_checks():
    quad = _quadrature()

    for polytope in (random_symmetric_polytope(3, 9, seed=1), ball_polytope(3, 18, seed=2)):
        report = tomography_suite(polytope, quad)
        assert report.passed, [check.name for check in report.checks if not check.passed]


def test_identity_suite_asserted_checks_pass():
    checks = identity_suite(build_sphere_quadrature(3, 32))

    assert all(check.passed for check in checks)
    ratio = next(check for check in checks if check.name == "identity_a.ratio")
    assert not ratio.asserted
    assert ratio.value == pytest.approx(4.0)


def test_identity_suite_requires_n3():
    with pytest.raises(UnsupportedDimensionError):
        identity_suite(build_sphere_quadrature(4, 8))


def _unimodular_map() -> np.ndarray:
    shear = np.array([[1.0, 0.3, -0.2], [0.0, 1.0, 0.5], [0.0, 0.0, 1.0]])
    return np.diag([2.0, 0.5, 1.0]) @ shear


def _projection_volumes(P: Polytope) -> tuple[float, float]:
    generators = P.areas[:, None] * P.normals
    return zonotope_volume(generators), zonotope_polar_volume(projection_body(P), generators)


def test_projection_body_volumes_are_invariant_under_unit_determinant_maps():
    P = random_symmetric_polytope(3, 9, seed=3)
    mapped = P.transformed(_unimodular_map())

    assert np.linalg.det(_unimodular_map()) == pytest.approx(1.0)
    volume, polar = _projection_volumes(P)
    mapped_volume, mapped_polar = _projection_volumes(mapped)
    assert mapped_volume == pytest.approx(volume, rel=1e-9)
    assert mapped_polar == pytest.approx(polar, rel=1e-9)


def test_psi_body_volumes_are_rotation_invariant():
    quad = _quadrature()
    P = random_symmetric_polytope(3, 9, seed=4)
    rotated = P.transformed(special_ortho_group.rvs(3, random_state=8))

    values = polytope_tomography_values(P, quad)
    rotated_values = polytope_tomography_values(rotated, quad)

    for key in ("psi", "polar_psi"):
        bar = 3.0 * (values.relative_errors[key] + rotated_values.relative_errors[key])
        assert getattr(rotated_values, key) == pytest.approx(getattr(values, key), rel=bar)
