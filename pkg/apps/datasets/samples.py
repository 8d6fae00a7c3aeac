"""
Training/evaluation samples rendered from one equirect panorama
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from apps.core.exceptions import DatasetError
from apps.core.imaging import center_crop_square, read_image, resize_image, write_image
from apps.geometry.types import SIDE_FACES, EquirectPanorama, ViewSet
from apps.geometry.views import render_view

from .normalization import denormalize, normalize
from .pyramid import ScalePyramid, make_pyramid

logger = logging.getLogger(__name__)

# Yaw of the north, west, south and east views
VIEW_YAWS = (0.0, 90.0, 180.0, 270.0)
VIEW_FILES = tuple(f"view_{key[0]}.png" for key in SIDE_FACES)
PYRAMID_FILES = {'s': 'gt_s.png', 'm': 'gt_m.png', 'l': 'gt_l.png'}
SPLITS = ('train', 'test')
DEFAULT_FOV_RANGE = (45.0, 75.0)


@dataclass(frozen=True)
class SampleRecord:
    id: str
    views: ViewSet
    fov_deg: float
    gt_pyramid: ScalePyramid
    split: str = 'train'

    def save(self, directory: Path) -> Path:
        """Write views and pyramid levels as 8-bit PNGs"""
        directory = Path(directory)
        for name, view in zip(VIEW_FILES, self.views.views):
            write_image(directory / name, denormalize(view))
        for scale, name in PYRAMID_FILES.items():
            write_image(directory / name, denormalize(self.gt_pyramid.level(scale)))
        return directory


def generate_sample(
    p: EquirectPanorama,
    fov_deg: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
    *,
    record_id: str = 'sample',
    view_size: int = 256,
    large_height: Optional[int] = None,
    fov_range=DEFAULT_FOV_RANGE,
    split: str = 'train',
) -> SampleRecord:
    """
    Render the four compass views at one shared fov plus the ground-truth pyramid

    Views are rendered from the large pyramid level at pitch 0 and yaw 0, 90,
    180 and 270. When fov_deg is None it is drawn uniformly from fov_range
    with rng.

    Raises:
        DatasetError: fov outside (0, 90] or missing rng
    """
    if p.value_range != 'normalized':
        p = EquirectPanorama(normalize(p.pixels), value_range='normalized')
    if fov_deg is None:
        if rng is None:
            raise DatasetError("generate_sample needs either fov_deg or an rng to draw it")
        fov_deg = float(rng.uniform(*fov_range))
    if not 0.0 < fov_deg <= 90.0:
        raise DatasetError(f"Sample fov must be in (0, 90] degrees, got {fov_deg}")
    if not fov_range[0] <= fov_deg <= fov_range[1]:
        logger.debug("fov %.2f outside the training range %s", fov_deg, fov_range)
    if split not in SPLITS:
        raise DatasetError(f"Unknown split '{split}'")

    pyramid = make_pyramid(p, large_height)
    large = EquirectPanorama(pyramid.large)
    views = tuple(render_view(large, yaw, 0.0, fov_deg, view_size) for yaw in VIEW_YAWS)
    return SampleRecord(
        id=record_id,
        views=ViewSet(views, fov_deg=fov_deg),
        fov_deg=float(fov_deg),
        gt_pyramid=pyramid,
        split=split,
    )


def load_views(directory: Path) -> ViewSet:
    """Read the four normalized views of a stored record"""
    return ViewSet(tuple(normalize(read_image(Path(directory) / name)) for name in VIEW_FILES))


def read_views(paths: Sequence) -> ViewSet:
    """
    Four photos in north, west, south, east order as a normalized ViewSet

    Non-square photos are center-cropped to a square; views of different sizes
    are resized to the smallest one.
    """
    views = []
    for path in paths:
        pixels = read_image(path)
        height, width = pixels.shape[:2]
        if height != width:
            pixels = center_crop_square(pixels)
            logger.info("Center-cropped %s from %dx%d to %dx%d", path, height, width, *pixels.shape[:2])
        views.append(normalize(pixels))
    size = min(v.shape[0] for v in views)
    if any(v.shape[0] != size for v in views):
        logger.info("Resizing views to %dx%d", size, size)
        views = [resize_image(v, (size, size)) for v in views]
    return ViewSet(tuple(views))


def load_ground_truth(directory: Path, scale: str) -> np.ndarray:
    path = Path(directory) / PYRAMID_FILES[scale]
    if not path.exists():
        raise DatasetError(f"Missing ground truth {path}")
    return normalize(read_image(path))
