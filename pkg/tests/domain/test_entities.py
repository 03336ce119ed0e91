import math

import numpy as np
import pytest

from src.domain.entities.hyperplane_density import DensityKind, HyperplaneDensity
from src.domain.entities.polytope import Polytope
from src.domain.entities.quadrature_rule import QuadratureRule
from src.domain.entities.spherical_measure import SphericalMeasure
from src.domain.exceptions import DegenerateBodyError, DomainError
from src.domain.services.numerics import constants
from src.domain.value_objects.bound_check import BoundCheck


def _octahedron_rule() -> QuadratureRule:
    nodes = np.concatenate([np.eye(3), -np.eye(3)])
    return QuadratureRule(n=3, nodes=nodes, weights=np.full(6, 4.0 * math.pi / 6.0), accuracy_budget=0.1)


def test_measure_merges_nearby_atoms():
    mu = SphericalMeasure.from_atoms([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], [0.5, 0.5, 1.0])

    assert mu.size == 2
    assert mu.mass == pytest.approx(2.0)


def test_measure_rejects_non_unit_direction():
    with pytest.raises(DomainError):
        SphericalMeasure.from_atoms([[2.0, 0.0, 0.0]], [1.0])


def test_measure_detects_evenness():
    even = SphericalMeasure.from_atoms([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], [1.0, 1.0])
    odd = SphericalMeasure.from_atoms([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]], [1.0, 1.0])

    assert even.is_even
    assert not odd.is_even


def test_cube_volume_and_surface():
    cube = Polytope.cube(3, side=2.0)

    assert cube.volume == pytest.approx(8.0)
    assert cube.surface_area == pytest.approx(24.0)
    assert cube.minkowski_defect() == pytest.approx(0.0)


def test_transformed_scales_volume_by_determinant():
    phi = np.diag([2.0, 1.0, 0.5])
    image = Polytope.cube(3).transformed(phi)

    assert image.volume == pytest.approx(1.0)
    assert image.surface_area == pytest.approx(2.0 * (2.0 + 1.0 + 0.5))


def test_transformed_rejects_singular_map():
    with pytest.raises(DegenerateBodyError):
        Polytope.cube(3).transformed(np.diag([1.0, 1.0, 0.0]))


def test_polytope_rejects_minkowski_violation():
    with pytest.raises(DomainError):
        Polytope(normals=np.eye(3), areas=np.ones(3))


def test_polytope_without_geometry_has_no_volume():
    cube = Polytope.cube(3)
    bare = Polytope(normals=cube.normals, areas=cube.areas)

    assert not bare.has_volume
    with pytest.raises(DomainError):
        _ = bare.volume


def test_from_vertices_merges_coplanar_simplices():
    corners = Polytope.cube(3).vertices

    hull = Polytope.from_vertices(corners)

    assert hull.facet_count == 6
    np.testing.assert_allclose(np.sort(hull.areas), np.ones(6))
    assert hull.volume == pytest.approx(1.0)


def test_quadrature_rule_checks_weight_sum():
    rule = _octahedron_rule()

    assert rule.size == 6
    assert rule.integrate(np.ones(6)) == pytest.approx(4.0 * math.pi)
    with pytest.raises(DomainError):
        QuadratureRule(n=3, nodes=rule.nodes, weights=np.ones(6), accuracy_budget=0.1)


def test_quadrature_nodes_are_read_only():
    rule = _octahedron_rule()

    with pytest.raises(ValueError):
        rule.nodes[0, 0] = 0.0


def test_exp_density_declared_integral_matches_radial_quadrature():
    density = HyperplaneDensity.exp_norm([0.0, 0.0, 1.0], rate=2.0)

    # 2-D: κ₂·Γ(3)/rate² = π·2/4
    assert density.declared_integral() == pytest.approx(math.pi / 2.0)
    assert density.radial_integral() == pytest.approx(math.pi / 2.0, rel=1e-8)


def test_ball_indicator_profile_vanishes_outside_radius():
    density = HyperplaneDensity.ball_indicator([1.0, 0.0, 0.0], radius=1.0, normalizer=1.0 / math.pi)

    np.testing.assert_allclose(density.profile(np.array([0.5, 1.5])), [1.0 / math.pi, 0.0])
    assert density.is_normalized()


def test_density_validation():
    with pytest.raises(DomainError):
        HyperplaneDensity.exp_norm([0.0, 0.0, 1.0], rate=0.0)
    with pytest.raises(DomainError):
        HyperplaneDensity(direction=[0.0, 0.0, 1.0], kind=DensityKind.CUSTOM)


def test_bound_check_applies_sigma_slack():
    check = BoundCheck(name="x", value=1.05, upper=1.0, error=0.02)

    assert check.passed
    assert not BoundCheck(name="x", value=1.05, upper=1.0, error=0.01).passed


def test_bound_check_non_finite_value_fails():
    assert not BoundCheck(name="x", value=math.nan).passed


def test_recorded_checks_always_pass():
    assert BoundCheck.recorded("ratio", math.inf).passed


def test_equality_and_flag():
    assert BoundCheck.equality("eq", 1.0 + 1e-9, 1.0, 1e-8).passed
    assert not BoundCheck.flag("flag", observed=False).passed
    assert BoundCheck.flag("flag", observed=False, expected=False).passed


def test_dimension_constants_at_three():
    c = constants(3)

    assert c.kappa == pytest.approx(4.0 * math.pi / 3.0)
    assert c.gamma == pytest.approx(3.0 * math.pi / 4.0)
    assert c.alpha == pytest.approx(192.0 / math.sqrt(2.0))
    assert c.sphere_area == pytest.approx(4.0 * math.pi)
    assert set(c.to_dict()) == {"n", "kappa", "alpha", "gamma", "log_kappa", "log_alpha", "log_gamma"}


def test_dimension_constants_reject_small_dimension():
    with pytest.raises(DomainError):
        constants(2)
