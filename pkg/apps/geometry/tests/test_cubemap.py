import numpy as np
import pytest

from apps.core.exceptions import GeometryError
from apps.geometry.cubemap import cubemap_to_equirect, equirect_to_cubemap, face_boundary_mask, face_index_map
from apps.geometry.projection import pixel_centers
from apps.geometry.types import FACE_KEYS, FACE_ORIENTATION, CubeMapFaces, EquirectPanorama
from apps.geometry.views import render_view
from apps.metrics.quality import psnr


def test_constant_panorama_gives_constant_faces():
    pano = EquirectPanorama(np.full((16, 32, 3), 0.25))
    faces = equirect_to_cubemap(pano, 8)
    assert tuple(faces.faces) == FACE_KEYS
    for face in faces.faces.values():
        assert face.shape == (8, 8, 3)
        np.testing.assert_allclose(face, 0.25)


def test_bright_spot_at_panorama_center_lands_in_north_face_center():
    pixels = np.full((32, 64, 3), -1.0)
    pixels[15:17, 31:33] = 1.0
    faces = equirect_to_cubemap(EquirectPanorama(pixels), 16)

    north = faces.faces['north'][..., 0]
    row, col = np.unravel_index(np.argmax(north), north.shape)
    assert row in (7, 8) and col in (7, 8)
    assert faces.faces['south'].max() == pytest.approx(-1.0)


@pytest.mark.parametrize('key', FACE_KEYS)
def test_faces_match_rendered_views_exactly(pano_factory, key):
    pano = pano_factory(32)
    faces = equirect_to_cubemap(pano, 12)
    yaw, pitch = FACE_ORIENTATION[key]
    assert np.array_equal(faces.faces[key], render_view(pano, yaw, pitch, 90.0, 12))


def test_solid_faces_warp_to_face_index_map():
    colors = np.linspace(-0.9, 0.9, 6)
    faces = CubeMapFaces.from_sequence([np.full((8, 8, 3), c) for c in colors])
    pano = cubemap_to_equirect(faces, 24)

    assert pano.pixels.shape == (24, 48, 3)
    np.testing.assert_allclose(pano.pixels[..., 0], colors[face_index_map(24)])


def test_round_trip_keeps_mid_latitudes(pano_factory):
    pano = pano_factory(64)
    back = cubemap_to_equirect(equirect_to_cubemap(pano, 64), 64)

    _, v = pixel_centers(64, 128)
    band = np.abs(90.0 - v[:, 0] * 180.0) <= 60.0
    assert psnr(back.pixels[band], pano.pixels[band], peak=2.0) > 30.0


def test_horizon_rows_cross_four_face_boundaries():
    mask = face_boundary_mask(32)
    assert mask.shape == (32, 64)
    assert mask[15].sum() == 4
    assert mask[16].sum() == 4


@pytest.mark.parametrize('size', [0, 1])
def test_degenerate_sizes_are_rejected(pano_factory, size):
    with pytest.raises(GeometryError):
        equirect_to_cubemap(pano_factory(16), size)
    with pytest.raises(GeometryError):
        cubemap_to_equirect(CubeMapFaces.from_sequence([np.zeros((4, 4, 3))] * 6), size)


def test_mixed_face_sizes_are_rejected():
    faces = [np.zeros((4, 4, 3))] * 5 + [np.zeros((6, 6, 3))]
    with pytest.raises(GeometryError):
        CubeMapFaces.from_sequence(faces)
