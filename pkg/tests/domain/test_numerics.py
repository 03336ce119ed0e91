import math

import numpy as np
import pytest

from src.domain.exceptions import ConfigurationError, DomainError
from src.domain.services.numerics import (
    BUDGET_SAFETY_FACTOR,
    build_sphere_quadrature,
    constants,
    gegenbauer_ratio,
    unit_ball_volume,
    unit_ball_volume_recurrence,
)


def test_constants_at_three_match_closed_forms():
    c = constants(3)

    assert c.kappa == pytest.approx(4.0 * math.pi / 3.0, rel=1e-12)
    assert c.gamma == pytest.approx(3.0 * math.pi / 4.0, rel=1e-9)
    assert c.alpha == pytest.approx(192.0 / math.sqrt(2.0), rel=1e-9)
    assert c.sphere_area == pytest.approx(4.0 * math.pi, rel=1e-12)


def test_constants_reject_small_dimension():
    with pytest.raises(DomainError):
        constants(2)


def test_gamma_is_increasing():
    gammas = [constants(n).gamma for n in range(3, 51)]

    assert all(b > a for a, b in zip(gammas, gammas[1:]))


def test_large_dimension_keeps_logs_finite():
    c = constants(400)

    assert math.isfinite(c.log_alpha)
    assert math.isfinite(c.log_gamma)
    assert c.log_gamma > 0.0


def test_unit_ball_recurrence_agrees_with_log_gamma():
    for m in range(0, 51):
        assert unit_ball_volume_recurrence(m) == pytest.approx(unit_ball_volume(m), rel=1e-12)


def test_gegenbauer_ratio_is_one_at_one():
    for n in (3, 4, 7):
        for k in range(0, 21):
            assert gegenbauer_ratio(n, k, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_gegenbauer_ratio_reduces_to_legendre_for_n3():
    t = np.linspace(-1.0, 1.0, 9)

    assert gegenbauer_ratio(3, 2, 0.0) == pytest.approx(-0.5)
    np.testing.assert_allclose(gegenbauer_ratio(3, 3, t), 0.5 * (5.0 * t ** 3 - 3.0 * t), atol=1e-14)


def test_gegenbauer_ratio_rejects_out_of_range_argument():
    with pytest.raises(DomainError):
        gegenbauer_ratio(3, 2, 1.5)


def test_quadrature_n3_is_antipodal_and_normalized():
    quad = build_sphere_quadrature(3, 16)

    assert quad.weights.sum() == pytest.approx(4.0 * math.pi, rel=1e-12)
    np.testing.assert_allclose(quad.nodes[: quad.size // 2], -quad.nodes[quad.size // 2:])
    assert 0.0 < quad.accuracy_budget < 0.1


def test_quadrature_budget_covers_cosine_kernel_with_safety_factor():
    quad = build_sphere_quadrature(3, 16)
    polar_error = abs(quad.integrate(np.abs(quad.nodes[:, 2])) - 2.0 * math.pi) / (2.0 * math.pi)

    assert BUDGET_SAFETY_FACTOR * polar_error <= quad.accuracy_budget * (1.0 + 1e-9)
    assert build_sphere_quadrature(3, 64).accuracy_budget < quad.accuracy_budget


def test_quadrature_n3_integrates_sine_kernel():
    quad = build_sphere_quadrature(3, 32)
    v = np.array([1.0, 2.0, 2.0]) / 3.0
    dots = quad.nodes @ v

    value = quad.integrate(np.sqrt(np.clip(1.0 - dots * dots, 0.0, None)))

    assert value == pytest.approx(math.pi ** 2, rel=quad.accuracy_budget)


def test_quadrature_high_dimension_has_exact_second_moment():
    quad = build_sphere_quadrature(4, 8, seed=3)
    kappa = constants(4).kappa

    moment = (quad.nodes * quad.weights[:, None]).T @ quad.nodes

    np.testing.assert_allclose(moment, kappa * np.eye(4), atol=1e-10)
    # 2^3 Sobol points x 2^4 signs x 4 shifts
    assert quad.size == 8 * 16 * 4


def test_quadrature_odd_integrand_vanishes():
    quad = build_sphere_quadrature(5, 8, seed=1)
    x = np.array([0.3, -1.2, 0.5, 2.0, 0.1])

    assert abs(quad.integrate((quad.nodes @ x) ** 3)) < 1e-10


def test_quadrature_rejects_low_resolution():
    with pytest.raises(ConfigurationError):
        build_sphere_quadrature(3, 2)
