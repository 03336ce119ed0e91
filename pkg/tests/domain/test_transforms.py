import math

import numpy as np
import pytest

from src.domain.exceptions import DomainError, UnsupportedDimensionError
from src.domain.services.measures import cross_measure, evenize, simplex_measure
from src.domain.services.numerics import build_sphere_quadrature, constants, unit_ball_volume
from src.domain.services.transforms import (
    cosine_transform,
    even_injectivity_diagnostic,
    funk_hecke_multiplier,
    multiplier_action_residual,
    signed_atom_distance,
    sine_transform,
)
from src.domain.value_objects.kernel_kind import KernelKind


def _quadrature(resolution: int = 32):
    return build_sphere_quadrature(3, resolution)


def test_sine_transform_of_cross_measure():
    mu = cross_measure(3)
    x = np.array([1.0, 2.0, 2.0])

    expected = sum(math.sqrt(9.0 - xi * xi) for xi in x)

    assert sine_transform(mu, x) == pytest.approx(expected)


def test_cosine_transform_of_cross_measure_is_l1_norm():
    mu = cross_measure(4)
    x = np.array([[1.0, -2.0, 0.5, 0.0], [0.0, 0.0, 0.0, 3.0]])

    np.testing.assert_allclose(cosine_transform(mu, x), [3.5, 3.0])


def test_transforms_are_homogeneous_and_even():
    mu = evenize(simplex_measure(3))
    x = np.array([0.3, -0.4, 1.1])

    assert sine_transform(mu, 2.5 * x) == pytest.approx(2.5 * sine_transform(mu, x))
    assert sine_transform(mu, -x) == pytest.approx(sine_transform(mu, x))


def test_sine_transform_of_simplex_equals_evenized():
    x = np.array([0.7, 0.1, -0.2])

    assert sine_transform(simplex_measure(3), x) == pytest.approx(sine_transform(evenize(simplex_measure(3)), x))


def test_transform_rejects_dimension_mismatch():
    with pytest.raises(DomainError):
        sine_transform(cross_measure(3), np.ones(4))


def test_sine_zero_multiplier_is_pi_squared_at_three():
    assert funk_hecke_multiplier(KernelKind.SINE, 3, 0) == pytest.approx(math.pi ** 2, rel=1e-9)


def test_zero_multiplier_matches_sphere_integrals():
    for n in (3, 4, 6):
        c = constants(n)
        assert funk_hecke_multiplier(KernelKind.SINE, n, 0) == pytest.approx(c.kappa * c.gamma, rel=1e-9)
        assert funk_hecke_multiplier(KernelKind.COSINE, n, 0) == pytest.approx(2.0 * unit_ball_volume(n - 1), rel=1e-9)


def test_odd_multipliers_vanish_and_even_do_not():
    for n in range(3, 7):
        for k in range(0, 5):
            assert abs(funk_hecke_multiplier(KernelKind.SINE, n, 2 * k + 1)) < 1e-10
            assert abs(funk_hecke_multiplier(KernelKind.SINE, n, 2 * k)) > 1e-6


def test_multiplier_rejects_negative_degree():
    with pytest.raises(DomainError):
        funk_hecke_multiplier(KernelKind.SINE, 3, -1)


@pytest.mark.parametrize("kernel", [KernelKind.SINE, KernelKind.COSINE])
def test_multiplier_action_residual_within_budget(kernel):
    quad = _quadrature(48)

    for k in (0, 2):
        assert multiplier_action_residual(kernel, k, quad) < quad.accuracy_budget


def test_multiplier_action_residual_requires_n3():
    with pytest.raises(UnsupportedDimensionError):
        multiplier_action_residual(KernelKind.SINE, 2, build_sphere_quadrature(4, 8))


def test_signed_atom_distance_of_identical_measures_is_zero():
    mu = cross_measure(3)

    assert signed_atom_distance(mu, mu) == 0.0
    # Helmert 単体は −e₃ を頂点に持つので ±e₃ の原子だけ重なる
    assert signed_atom_distance(mu, evenize(simplex_measure(3))) == pytest.approx(4.5)


def test_injectivity_diagnostic_separates_rotated_cross():
    quad = _quadrature(16)
    mu = cross_measure(3)
    c, s = math.cos(0.4), math.sin(0.4)
    rotated = mu.rotated(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))

    same = even_injectivity_diagnostic(mu, mu, quad)
    different = even_injectivity_diagnostic(mu, rotated, quad)

    assert same.consistent_with_injectivity
    assert same.transform_distance == 0.0
    assert different.consistent_with_injectivity
    assert different.transform_distance > different.transform_tolerance


def test_injectivity_diagnostic_requires_even_measures():
    with pytest.raises(DomainError):
        even_injectivity_diagnostic(simplex_measure(3), cross_measure(3), _quadrature(8))


def test_sine_transform_of_cross_at_diagonal_is_sqrt6():
    x = np.ones(3) / math.sqrt(3.0)

    assert sine_transform(cross_measure(3), x) == pytest.approx(math.sqrt(6.0))


def test_sine_transform_is_subadditive_on_sampled_pairs():
    mu = evenize(simplex_measure(3))
    rng = np.random.default_rng(5)
    x = rng.standard_normal((1000, 3))
    y = rng.standard_normal((1000, 3))

    assert np.all(sine_transform(mu, x + y) <= sine_transform(mu, x) + sine_transform(mu, y) + 1e-12)


def test_transforms_respect_cauchy_schwarz_caps():
    mu = evenize(simplex_measure(4))
    x = np.random.default_rng(6).standard_normal((200, 4))
    x /= np.linalg.norm(x, axis=1)[:, None]

    assert np.max(sine_transform(mu, x)) <= math.sqrt(12.0) + 1e-9
    assert np.max(cosine_transform(mu, x)) <= 2.0 + 1e-9
    assert cosine_transform(mu, np.zeros(4)) == 0.0
