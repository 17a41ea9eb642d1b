import math

import numpy as np
import pytest

from unscathed.exceptions import DomainError
from unscathed.models import Configuration, ParamVector, PlanarPoint
from unscathed.parametrization import (
    forward_map,
    forward_map_array,
    in_region_x,
    in_region_x_array,
    inverse_map,
    inverse_map_array,
    jacobian_abs_det,
    numeric_jacobian_abs,
)


@pytest.fixture
def three_point():
    return ParamVector(n=3, theta=0.3, thetas=(2.0, 2.1), r=1.2, ts=(1.1, 0.9))


def test_forward_map_places_points_counterclockwise(three_point):
    config = forward_map(three_point)
    assert config.n == 3
    assert config.points[0].norm == pytest.approx(1.2)
    assert config.points[1].norm == pytest.approx(1.2 * 1.1)
    assert config.points[2].norm == pytest.approx(1.2 * 1.1 * 0.9)
    assert config.points[1].argument == pytest.approx(2.3)


def test_inverse_map_recovers_parameters(three_point):
    recovered = inverse_map(forward_map(three_point))
    assert recovered.theta == pytest.approx(three_point.theta)
    assert recovered.thetas == pytest.approx(three_point.thetas)
    assert recovered.r == pytest.approx(three_point.r)
    assert recovered.ts == pytest.approx(three_point.ts)


def test_derived_gap_and_ratio(three_point):
    assert three_point.theta_n == pytest.approx(2 * math.pi - 4.1)
    assert three_point.t_n == pytest.approx(1.0 / (1.1 * 0.9))


def test_array_maps_agree_with_scalar_ones(three_point):
    points = forward_map_array(
        np.array([three_point.theta]),
        np.array([three_point.thetas]),
        np.array([three_point.r]),
        np.array([three_point.ts]),
    )
    config = forward_map(three_point)
    assert points[0].tolist() == pytest.approx([[p.x, p.y] for p in config.points])
    theta, thetas, r, ts = inverse_map_array(points)
    assert theta[0] == pytest.approx(three_point.theta)
    assert thetas[0].tolist() == pytest.approx(list(three_point.thetas))
    assert r[0] == pytest.approx(three_point.r)
    assert ts[0].tolist() == pytest.approx(list(three_point.ts))


def test_inverse_map_rejects_shared_argument():
    with pytest.raises(DomainError):
        inverse_map(Configuration.from_xy([(1.0, 0.0), (2.0, 0.0)]))


def test_inverse_map_rejects_clockwise_tuple():
    config = Configuration.from_xy([(1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)])
    with pytest.raises(DomainError):
        inverse_map(config)


def test_param_vector_shape_is_checked():
    with pytest.raises(ValueError):
        ParamVector(n=3, theta=0.0, thetas=(1.0,), r=1.0, ts=(1.0, 1.0))
    with pytest.raises(ValueError):
        ParamVector(n=2, theta=0.0, thetas=(1.0,), r=1.0, ts=(0.0,))


def test_jacobian_closed_form_matches_central_differences(three_point):
    closed = jacobian_abs_det(three_point)
    assert closed == pytest.approx(1.2**5 * 1.1**3 * 0.9)
    assert numeric_jacobian_abs(three_point) == pytest.approx(closed, rel=1e-5)


def test_jacobian_of_single_point_is_r():
    assert jacobian_abs_det(ParamVector(n=1, theta=0.0, r=2.5)) == pytest.approx(2.5)


def test_regular_pentagon_is_in_region():
    p = ParamVector(n=5, theta=0.0, thetas=(2 * math.pi / 5,) * 4, r=1.0, ts=(1.0,) * 4)
    assert in_region_x(p)


def test_geometric_spiral_leaves_region():
    config = Configuration(points=tuple(PlanarPoint.polar(1.5**k, 2 * math.pi * k / 5) for k in range(5)))
    assert not in_region_x(inverse_map(config))


def test_region_needs_gaps_above_a_third_of_pi():
    assert not in_region_x(ParamVector(n=2, theta=0.0, thetas=(1.0,), r=1.0, ts=(1.0,)))
    assert in_region_x(ParamVector(n=2, theta=0.0, thetas=(math.pi,), r=1.0, ts=(5.0,)))


def test_region_array_matches_scalar():
    thetas = np.array([[1.3], [0.9], [2.0]])
    ts = np.array([[1.0], [1.0], [3.0]])
    expected = [in_region_x(ParamVector(n=2, theta=0.0, thetas=tuple(a), r=1.0, ts=tuple(b))) for a, b in zip(thetas, ts)]
    assert in_region_x_array(thetas, ts).tolist() == expected
