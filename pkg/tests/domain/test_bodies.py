import math

import numpy as np
import pytest

from src.domain.entities.spherical_measure import SphericalMeasure
from src.domain.entities.support_body import VolumeMethod
from src.domain.exceptions import ConfigurationError, DegenerateBodyError, DomainError
from src.domain.services import bodies
from src.domain.services.measures import cross_measure, simplex_measure
from src.domain.services.numerics import build_sphere_quadrature, unit_ball_volume
from src.domain.services.transforms import sine_transform


def _doubled_cross() -> SphericalMeasure:
    mu = cross_measure(3)
    return SphericalMeasure.from_atoms(mu.directions, 2.0 * mu.weights, merge=False)


def _quadrature(n: int = 3):
    return build_sphere_quadrature(n, 24 if n == 3 else 8)


def test_ball_gauge_and_polar_volume():
    body = bodies.ball(3, radius=2.0)

    assert bodies.gauge(body, [1.0, 0.0, 0.0]) == pytest.approx(0.5)
    assert bodies.polar_volume(body, _quadrature()) == pytest.approx(unit_ball_volume(3) / 8.0, rel=1e-12)


def test_cosine_body_of_cross_is_cube():
    body = bodies.cosine_body(cross_measure(3))

    assert body.h(np.array([1.0, -2.0, 0.5])) == pytest.approx(3.5)
    assert bodies.gauge(body, [0.5, 0.2, -0.1]) == pytest.approx(0.5, rel=1e-9)
    assert bodies.gauge(body, [0.0, 0.0, 0.0]) == 0.0


def test_sine_body_support_matches_transform():
    mu = cross_measure(3)
    body = bodies.sine_body(mu)
    x = np.array([[0.2, 0.5, -1.0], [1.0, 0.0, 0.0]])

    np.testing.assert_allclose(body.support(x), sine_transform(mu, x))


def test_sine_body_gauge_is_one_on_boundary():
    body = bodies.sine_body(cross_measure(3))
    quad = _quadrature()
    direction = quad.nodes[5]

    # radial point ρ(u)u sits on the boundary
    radius = 1.0 / bodies.gauge(body, direction)

    assert bodies.gauge(body, radius * direction) == pytest.approx(1.0, rel=1e-9)
    assert bodies.gauge(body, 0.5 * radius * direction) == pytest.approx(0.5, rel=1e-9)


def test_sine_body_requires_even_measure():
    with pytest.raises(DomainError):
        bodies.sine_body(simplex_measure(3))


def test_sine_body_rejects_antipodal_pair():
    mu = SphericalMeasure.from_atoms([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], [1.5, 1.5])

    with pytest.raises(DegenerateBodyError):
        bodies.sine_body(mu)


def test_radial_volume_of_ball_is_exact():
    quad = _quadrature(4)

    estimate = bodies.volume(bodies.ball(4), VolumeMethod.EXP_INTEGRAL, quad=quad)

    assert estimate.value == pytest.approx(unit_ball_volume(4), rel=1e-12)
    assert estimate.method is VolumeMethod.EXP_INTEGRAL


def test_radial_volume_of_cube_is_close_to_eight():
    estimate = bodies.volume(bodies.cosine_body(cross_measure(3)), VolumeMethod.EXP_INTEGRAL, quad=_quadrature())

    assert estimate.value == pytest.approx(8.0, rel=0.02)


def test_membership_volume_of_ball_within_error_bars():
    estimate = bodies.membership_volume(bodies.ball(3), samples=20_000, seed=3, max_workers=2, chunk_size=5_000)

    assert estimate.method is VolumeMethod.MC_MEMBERSHIP
    assert abs(estimate.value - 4.0 * math.pi / 3.0) <= 4.0 * estimate.std_error


def test_membership_volume_is_deterministic_across_worker_counts():
    body = bodies.cosine_body(cross_measure(3))

    first = bodies.membership_volume(body, samples=4_000, seed=9, max_workers=1, chunk_size=1_000)
    second = bodies.membership_volume(body, samples=4_000, seed=9, max_workers=4, chunk_size=1_000)

    assert first.value == second.value


def test_membership_volume_rejects_small_sample_count():
    with pytest.raises(ConfigurationError):
        bodies.membership_volume(bodies.ball(3), samples=10, seed=0)


def test_exp_integral_volume_requires_quadrature():
    with pytest.raises(ConfigurationError):
        bodies.volume(bodies.ball(3), VolumeMethod.EXP_INTEGRAL)


def test_urysohn_gap_vanishes_for_ball_and_is_positive_for_sine_body():
    quad = _quadrature()

    assert abs(bodies.urysohn_gap(bodies.ball(3), quad)) < 1e-9
    assert bodies.urysohn_gap(bodies.sine_body(cross_measure(3)), quad) > 0.0


def test_mean_width_functional_of_ball_is_radius():
    assert bodies.mean_width_functional(bodies.ball(3, 1.5), _quadrature()) == pytest.approx(1.5, rel=1e-12)


def test_polar_volume_rejects_mismatched_dimension():
    with pytest.raises(DomainError):
        bodies.polar_volume(bodies.ball(4), _quadrature(3))


def test_ball_polar_volume_times_volume_is_kappa_squared():
    body = bodies.ball(3, radius=2.0)
    quad = _quadrature()

    product = bodies.polar_volume(body, quad) * bodies.volume(body, VolumeMethod.EXP_INTEGRAL, quad=quad).value

    assert product == pytest.approx(unit_ball_volume(3) ** 2, rel=1e-9)


def test_scaling_the_measure_orders_volumes():
    quad = _quadrature()
    small = bodies.sine_body(cross_measure(3))
    large = bodies.sine_body(_doubled_cross())

    assert bodies.volume(small, VolumeMethod.EXP_INTEGRAL, quad=quad).value < bodies.volume(large, VolumeMethod.EXP_INTEGRAL, quad=quad).value
    assert bodies.polar_volume(small, quad) > bodies.polar_volume(large, quad)


def test_cross_sine_body_lies_in_ball_of_radius_sqrt6():
    body = bodies.sine_body(cross_measure(3))
    points = np.random.default_rng(11).standard_normal((40, 3))

    for x in points:
        assert bodies.gauge(body, x) >= np.linalg.norm(x) / math.sqrt(6.0) * (1.0 - 1e-6)


def test_sine_body_volume_is_rotation_invariant():
    quad = _quadrature()
    c, s = math.cos(0.7), math.sin(0.7)
    rotation = np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])

    original = bodies.volume(bodies.sine_body(cross_measure(3)), VolumeMethod.EXP_INTEGRAL, quad=quad)
    rotated = bodies.volume(bodies.sine_body(cross_measure(3).rotated(rotation)), VolumeMethod.EXP_INTEGRAL, quad=quad)

    assert rotated.value == pytest.approx(original.value, rel=0.02)


def _axes_and_diagonal_measure() -> SphericalMeasure:
    diagonal = np.ones(3) / math.sqrt(3.0)
    directions = np.concatenate([np.eye(3), -np.eye(3), [diagonal, -diagonal]])
    return SphericalMeasure.from_atoms(directions, np.ones(8))


def test_sine_body_lower_bound_improves_on_moment_floor():
    mu = _axes_and_diagonal_measure()
    body = bodies.sine_body(mu)
    quad = build_sphere_quadrature(3, 64)

    # mass 8, λ_max(Σ wᵢuᵢ⊗uᵢ) = 4
    assert body.lower_bound > 4.0 + 1e-6
    assert body.lower_bound <= float(np.min(body.support(quad.nodes)))


def test_cross_sine_body_keeps_attained_floor():
    assert bodies.sine_body(cross_measure(3)).lower_bound == pytest.approx(2.0)
