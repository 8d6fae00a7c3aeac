import numpy as np
import pytest

from apps.fov.constrain import constrain_views, empty_mask
from apps.geometry.cubemap import face_index_map
from apps.geometry.types import ViewSet

FILL = -1.0


def _flat_views(value: float = 0.5, size: int = 16) -> ViewSet:
    return ViewSet(tuple(np.full((size, size, 3), value) for _ in range(4)))


@pytest.mark.parametrize('fov', [45.0, 60.0, 75.0])
def test_untouched_pixels_are_inside_the_mask(fov):
    pano = constrain_views(_flat_views(), fov, face_size=32, fill=FILL, height=32)
    mask = empty_mask(fov, 32, height=32)
    values = pano.pixels[..., 0]

    assert pano.pixels.shape == (32, 64, 3)
    assert np.all(mask[values == FILL])
    assert not np.any(mask[values > 0.49])


def test_full_fov_leaves_only_up_and_down_empty():
    mask = empty_mask(90.0, 32, height=32)
    assert np.array_equal(mask, face_index_map(32) >= 4)


def test_mask_shrinks_as_fov_grows():
    counts = [int(empty_mask(fov, 64, height=32).sum()) for fov in (45.0, 60.0, 75.0, 90.0)]
    assert counts == sorted(counts, reverse=True)
    assert len(set(counts)) == 4


def test_poles_carry_the_fill_value():
    pano = constrain_views(_flat_views(), 75.0, face_size=16, fill=0.0, height=16)
    np.testing.assert_allclose(pano.pixels[0], 0.0)
    np.testing.assert_allclose(pano.pixels[-1], 0.0)
