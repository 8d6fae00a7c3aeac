"""
Shared fixtures: smooth synthetic panoramas, a tiny built dataset and a
tiny training configuration
"""
import numpy as np
import pytest

from apps.core.imaging import write_image
from apps.datasets.builder import build_dataset
from apps.datasets.normalization import denormalize
from apps.geometry.projection import equirect_uv_to_dir, pixel_centers
from apps.geometry.types import EquirectPanorama
from apps.synthesis.config import TrainConfig

TINY_LARGE_HEIGHT = 32
TINY_VIEW_SIZE = 16


def smooth_panorama(height: int = 32, phase: float = 0.0) -> EquirectPanorama:
    """Band-limited colors that are continuous on the sphere, values in [-0.9, 0.9]"""
    u, v = pixel_centers(height, 2 * height)
    d = equirect_uv_to_dir(u, v)
    x, y, z = d[..., 0], d[..., 1], d[..., 2]
    red = 0.6 * x + 0.3 * np.sin(phase + 2 * z)
    green = 0.5 * y + 0.3 * np.cos(phase + 2 * x)
    blue = 0.4 * z * y + 0.4 * np.sin(phase + x + z)
    pixels = np.clip(np.stack([red, green, blue], axis=-1), -0.9, 0.9)
    return EquirectPanorama(pixels)


@pytest.fixture(autouse=True)
def cpu_pipeline(settings):
    settings.PANO360_DEVICE = 'cpu'
    settings.PANO360_CACHE = None


@pytest.fixture
def pano_factory():
    return smooth_panorama


def write_sources(directory, count: int, height: int = 64):
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        pano = smooth_panorama(height, phase=0.7 * i)
        paths.append(write_image(directory / f'pano_{i:02d}.png', denormalize(pano.pixels)))
    return paths


@pytest.fixture
def source_factory():
    return write_sources


@pytest.fixture
def source_dir(tmp_path):
    directory = tmp_path / 'sources'
    write_sources(directory, 4)
    return directory


@pytest.fixture
def tiny_dataset(source_dir, tmp_path):
    """Four panoramas, two train and two test records, 32x64 large level"""
    return build_dataset(
        source_dir,
        tmp_path / 'dataset',
        split_ratio=0.5,
        seed=3,
        large_height=TINY_LARGE_HEIGHT,
        view_size=TINY_VIEW_SIZE,
        fov_law='tangent',
        fill='gray',
        workers=2,
    )


@pytest.fixture
def tiny_config():
    return TrainConfig(
        base_channels=8,
        unet_depth=2,
        residual_blocks=1,
        disc_channels=8,
        disc_layers=2,
        fov_channels=(8, 8),
        steps_small=4,
        steps_medium=2,
        steps_large=2,
        checkpoint_interval=2,
        seed=0,
    )
