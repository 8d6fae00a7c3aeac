import math

import numpy as np
import pytest

from apps.core.exceptions import GeometryError
from apps.metrics.quality import K1, psnr, ssim


def _textured(seed: int = 0, size: int = 48) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.integers(0, 256, size=(size, size, 3)).astype(np.uint8)


def test_psnr_of_a_uniform_offset():
    a = np.full((16, 16, 3), 100, dtype=np.uint8)
    b = np.full((16, 16, 3), 110, dtype=np.uint8)
    assert psnr(a, b) == pytest.approx(28.13, abs=0.01)


def test_psnr_of_identical_images_is_infinite():
    img = _textured()
    assert psnr(img, img) == math.inf


def test_psnr_peak_and_shape_checks():
    img = _textured()
    with pytest.raises(ValueError):
        psnr(img, img, peak=0)
    with pytest.raises(GeometryError):
        psnr(img, img[:-1])


def test_ssim_of_identical_images():
    img = _textured()
    assert ssim(img, img) == pytest.approx(1.0)


def test_ssim_of_constant_images_depends_on_means_only():
    a = np.full((32, 32, 3), 100.0)
    b = np.full((32, 32, 3), 150.0)
    c1 = (K1 * 255) ** 2
    expected = (2 * 100 * 150 + c1) / (100**2 + 150**2 + c1)
    assert ssim(a, b) == pytest.approx(expected, rel=1e-6)


def test_ssim_of_an_inverted_image_is_low():
    img = _textured()
    assert ssim(img, 255 - img) < 0.1


def test_ssim_is_symmetric():
    a, b = _textured(1), _textured(2)
    assert ssim(a, b) == pytest.approx(ssim(b, a))


def test_ssim_needs_a_full_window():
    img = np.zeros((10, 40, 3))
    with pytest.raises(GeometryError):
        ssim(img, img)
