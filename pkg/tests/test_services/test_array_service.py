import math

import numpy as np
import pytest

from app.schemas.array import AngleGrid, ArrayGeometry
from app.services.array import check_angle, detection_matrix, steering_vector
from app.services.exceptions import InvalidAngleError


def test_broadside_steering_is_all_ones():
    h = steering_vector(ArrayGeometry(num_elements=8), math.pi / 2, -1)
    np.testing.assert_allclose(h, np.ones(8), atol=1e-12)


def test_endfire_half_wavelength_alternates_sign():
    h = steering_vector(ArrayGeometry(num_elements=2, spacing_ratio=0.5), 0.0, -1)
    np.testing.assert_allclose(h, [1.0, -1.0], atol=1e-12)


@pytest.mark.parametrize("angle", [0.0, 0.3, 1.2, math.pi / 2, 2.9, math.pi])
def test_steering_norm_equals_element_count(angle):
    h = steering_vector(ArrayGeometry(num_elements=16), angle)
    assert np.linalg.norm(h) ** 2 == pytest.approx(16.0)


def test_phase_sign_conjugates():
    geometry = ArrayGeometry(num_elements=6)
    np.testing.assert_allclose(
        steering_vector(geometry, 1.1, 1), steering_vector(geometry, 1.1, -1).conj()
    )


def test_invalid_phase_sign_rejected():
    with pytest.raises(ValueError, match="phase_sign"):
        steering_vector(ArrayGeometry(num_elements=4), 1.0, 0)


@pytest.mark.parametrize("angle", [-0.1, math.pi + 1e-6, math.nan, math.inf])
def test_angle_out_of_range_rejected(angle):
    with pytest.raises(InvalidAngleError):
        steering_vector(ArrayGeometry(num_elements=4), angle)


def test_check_angle_accepts_boundaries():
    assert check_angle(0.0) == 0.0
    assert check_angle(math.pi) == math.pi


def test_detection_matrix_shape_and_unit_columns():
    matrix = detection_matrix(ArrayGeometry(num_elements=16), AngleGrid(num_points=180))
    assert matrix.shape == (16, 180)
    np.testing.assert_allclose(np.linalg.norm(matrix, axis=0), 1.0, atol=1e-12)


def test_detection_matrix_two_point_grid():
    matrix = detection_matrix(ArrayGeometry(num_elements=4), AngleGrid(num_points=2))
    np.testing.assert_allclose(matrix[:, 1], np.full(4, 0.5), atol=1e-12)
    np.testing.assert_allclose(matrix[:, 0], [0.5, -0.5, 0.5, -0.5], atol=1e-12)


def test_detection_column_matches_conjugated_steering():
    geometry = ArrayGeometry(num_elements=10)
    grid = AngleGrid(num_points=36)
    matrix = detection_matrix(geometry, grid)
    expected = steering_vector(geometry, float(grid.angles[7]), 1) / math.sqrt(10)
    np.testing.assert_allclose(matrix[:, 7], expected, atol=1e-12)


def test_matched_filter_peaks_at_on_grid_angle():
    geometry = ArrayGeometry(num_elements=16)
    grid = AngleGrid(num_points=180)
    matrix = detection_matrix(geometry, grid)
    for index in (0, 37, 90, 151, 179):
        response = np.abs(matrix.T @ steering_vector(geometry, float(grid.angles[index])))
        assert int(np.argmax(response)) == index
        assert response[index] == pytest.approx(4.0)


def test_matched_filter_symmetric_in_cosine_offset():
    geometry = ArrayGeometry(num_elements=16)
    alpha = 1.1
    target = steering_vector(geometry, alpha)
    for offset in (0.05, 0.2, 0.4):
        above = steering_vector(geometry, math.acos(math.cos(alpha) + offset), 1)
        below = steering_vector(geometry, math.acos(math.cos(alpha) - offset), 1)
        assert abs(above @ target) == pytest.approx(abs(below @ target), abs=1e-9)


def test_detection_matrix_is_read_only():
    matrix = detection_matrix(ArrayGeometry(num_elements=4), AngleGrid(num_points=8))
    with pytest.raises(ValueError):
        matrix[0, 0] = 0


def test_grid_excludes_pi():
    angles = AngleGrid(num_points=180).angles
    assert angles[0] == 0.0
    assert angles[-1] == pytest.approx(179 * math.pi / 180)


def test_grid_nearest_index():
    grid = AngleGrid(num_points=180)
    assert grid.nearest_index(float(grid.angles[42]) + 1e-4) == 42


def test_grid_defaults_from_settings(monkeypatch):
    monkeypatch.setattr("app.schemas.array.settings.DEFAULT_GRID_POINTS", 90)
    assert AngleGrid().num_points == 90


def test_geometry_rejects_non_positive_spacing():
    with pytest.raises(ValueError):
        ArrayGeometry(num_elements=4, spacing_ratio=0.0)
