import math

import pytest

from src.domain.exceptions import DomainError
from src.domain.services.asymptotics import (
    asymptotic_ratios,
    cross_measure_polar_interval,
    cross_measure_volume_interval,
    polar_volume_bounds,
    volume_bounds,
)


def test_ratios_are_reciprocal():
    table = asymptotic_ratios(40)

    for row in table.rows:
        assert row.r1 * row.r2 == pytest.approx(1.0, rel=1e-12)


def test_r1_tends_to_one():
    table = asymptotic_ratios(200)

    assert abs(table.row(200).r1 - 1.0) < 0.05
    assert abs(table.row(200).r1 - 1.0) < abs(table.row(10).r1 - 1.0)
    assert table.monotone_from is not None and table.monotone_from <= 200


def test_row_lookup_by_dimension():
    table = asymptotic_ratios(12)

    assert table.row(3).n == 3
    assert table.row(12).n == 12
    assert len(table.to_dict()["rows"]) == 10


def test_cross_measure_intervals_at_three():
    polar_lower, polar_upper = cross_measure_polar_interval(3)
    volume_lower, volume_upper = cross_measure_volume_interval(3)

    assert polar_lower == pytest.approx(0.285012, rel=1e-5)
    assert polar_upper == pytest.approx(0.403582, rel=1e-5)
    assert volume_lower == pytest.approx(43.476, rel=1e-4)
    assert volume_upper == pytest.approx(61.5624, rel=1e-5)


def test_polar_lower_bound_at_three():
    lower, upper = polar_volume_bounds(3)

    assert lower == pytest.approx(256.0 / (81.0 * math.pi ** 2), rel=1e-12)
    assert lower < upper


def test_bounds_stay_finite_in_high_dimension():
    lower, upper = volume_bounds(150)

    assert 0.0 < lower < upper < math.inf


def test_asymptotic_ratios_reject_small_nmax():
    with pytest.raises(DomainError):
        asymptotic_ratios(2)
