"""
Three-level image hierarchy used for progressive training
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from apps.core.exceptions import DatasetError
from apps.core.imaging import resize_image
from apps.geometry.types import EquirectPanorama

SCALES = ('s', 'm', 'l')
SCALE_NAMES = {'small': 's', 'medium': 'm', 'large': 'l'}
SCALE_FACTORS = {'s': 4, 'm': 2, 'l': 1}


def check_large_height(large_height: int) -> None:
    if large_height < 8 or large_height % 4:
        raise DatasetError(f"Large height must be a multiple of 4 and >= 8, got {large_height}")


def scale_height(scale: str, large_height: int) -> int:
    """Height of a pyramid level; width is always twice that"""
    return large_height // SCALE_FACTORS[scale]


def scales_through(stage: str):
    """Scales from small up to and including stage"""
    return SCALES[:SCALES.index(stage) + 1]


def area_downsample(img: np.ndarray, factor: int) -> np.ndarray:
    """Mean over factor x factor blocks; H and W must be divisible by factor"""
    height, width, channels = img.shape
    if height % factor or width % factor:
        raise DatasetError(f"Cannot area-downsample {height}x{width} by {factor}")
    blocks = np.asarray(img, dtype=np.float64).reshape(height // factor, factor, width // factor, factor, channels)
    return blocks.mean(axis=(1, 3))


@dataclass(frozen=True)
class ScalePyramid:
    """small = H/4 x W/4, medium = H/2 x W/2, large = H x W, all normalized"""

    small: np.ndarray
    medium: np.ndarray
    large: np.ndarray

    def __post_init__(self):
        for lower, upper in ((self.small, self.medium), (self.medium, self.large)):
            if (lower.shape[0] * 2, lower.shape[1] * 2) != upper.shape[:2]:
                raise DatasetError(
                    f"Pyramid levels must halve exactly, got {lower.shape[:2]} under {upper.shape[:2]}"
                )

    def level(self, scale: str) -> np.ndarray:
        return {'s': self.small, 'm': self.medium, 'l': self.large}[scale]


def make_pyramid(p: EquirectPanorama, large_height: Optional[int] = None) -> ScalePyramid:
    """
    Build the pyramid by area-weighted downsampling of the large level

    A panorama at another size is first resized to large_height x 2*large_height.
    """
    large_height = large_height or p.height
    check_large_height(large_height)
    large = resize_image(p.pixels, (large_height, 2 * large_height))
    if p.value_range == 'normalized':
        large = np.clip(large, -1.0, 1.0)
    return ScalePyramid(
        small=area_downsample(large, 4),
        medium=area_downsample(large, 2),
        large=large,
    )
