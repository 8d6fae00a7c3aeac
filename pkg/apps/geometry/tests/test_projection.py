import numpy as np
import pytest

from apps.core.exceptions import GeometryError
from apps.geometry.projection import (
    dir_to_equirect_uv,
    dir_to_face,
    equirect_uv_to_dir,
    face_uv_to_dir,
    sample_equirect,
)
from apps.geometry.types import FACE_KEYS, Direction


def test_north_maps_to_panorama_center():
    assert dir_to_equirect_uv(Direction(0.0, 0.0, 1.0)) == (0.5, 0.5)


def test_west_is_a_quarter_turn_right_of_center():
    u, v = dir_to_equirect_uv(Direction(1.0, 0.0, 0.0))
    assert u == pytest.approx(0.75)
    assert v == pytest.approx(0.5)


def test_pole_gets_zero_azimuth():
    assert dir_to_equirect_uv(Direction(0.0, 1.0, 0.0)) == (0.0, 0.0)
    u, v = dir_to_equirect_uv(Direction(0.0, -1.0, 0.0))
    assert (u, v) == (0.0, 1.0)


def test_direction_must_be_unit_length():
    with pytest.raises(GeometryError):
        Direction(1.0, 1.0, 0.0)


def test_uv_round_trip_over_random_directions():
    rng = np.random.default_rng(0)
    d = rng.normal(size=(10_000, 3))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    d = d[np.abs(d[:, 1]) < 0.999]

    back = equirect_uv_to_dir(*dir_to_equirect_uv(d))
    angle = np.arccos(np.clip(np.sum(back * d, axis=1), -1.0, 1.0))
    assert angle.max() < 1e-6


def test_face_principal_rays():
    assert face_uv_to_dir('north', 0.5, 0.5) == Direction(0.0, 0.0, 1.0)
    assert face_uv_to_dir('west', 0.5, 0.5) == Direction(1.0, 0.0, 0.0)
    assert face_uv_to_dir('up', 0.5, 0.5) == Direction(0.0, 1.0, 0.0)


def test_north_face_left_edge_is_minus_45_degrees_azimuth():
    d = face_uv_to_dir('north', 0.0, 0.5)
    assert np.degrees(np.arctan2(d.x, d.z)) == pytest.approx(-45.0)
    assert d.y == pytest.approx(0.0)


@pytest.mark.parametrize('fov', [0.0, 180.0, 200.0])
def test_face_rays_reject_bad_fov(fov):
    with pytest.raises(GeometryError):
        face_uv_to_dir('north', 0.5, 0.5, fov)


def test_face_rays_reject_unknown_face():
    with pytest.raises(GeometryError):
        face_uv_to_dir('front', 0.5, 0.5)


@pytest.mark.parametrize('index, key', list(enumerate(FACE_KEYS)))
def test_dir_to_face_inverts_face_rays(index, key):
    rng = np.random.default_rng(index)
    u = rng.uniform(0.05, 0.95, size=200)
    v = rng.uniform(0.05, 0.95, size=200)
    faces, fu, fv = dir_to_face(face_uv_to_dir(key, u, v))
    assert np.all(faces == index)
    np.testing.assert_allclose(fu, u, atol=1e-9)
    np.testing.assert_allclose(fv, v, atol=1e-9)


def test_sampler_wraps_horizontally():
    pixels = np.zeros((4, 8, 1))
    pixels[:, 0] = 1.0
    pixels[:, -1] = -1.0
    # exactly on the seam between the last and the first column
    seam = equirect_uv_to_dir(np.array([0.0]), np.array([0.5]))
    assert sample_equirect(pixels, seam)[0, 0] == pytest.approx(0.0)
