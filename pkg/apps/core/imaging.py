"""
Image I/O and resampling helpers built on Pillow

All images in the pipeline are row-major H x W x 3 NumPy arrays; files on
disk are 8-bit RGB PNG or JPEG.
"""
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from .exceptions import DatasetError

PathLike = Union[str, Path]

_RESAMPLERS = {
    'bilinear': Image.Resampling.BILINEAR,
    'bicubic': Image.Resampling.BICUBIC,
    'box': Image.Resampling.BOX,
}


def read_image(path: PathLike) -> np.ndarray:
    """
    Read an image file as uint8 RGB

    Raises:
        DatasetError: file missing or not a decodable image
    """
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert('RGB'), dtype=np.uint8).copy()
    except (OSError, UnidentifiedImageError) as e:
        raise DatasetError(f"Cannot read image {path}: {e}") from e


def write_image(path: PathLike, pixels: np.ndarray) -> Path:
    """Write a uint8 RGB array; format follows the file suffix"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if pixels.dtype != np.uint8:
        raise ValueError(f"write_image expects uint8 pixels, got {pixels.dtype}")
    Image.fromarray(pixels, mode='RGB').save(path)
    return path


def resize_image(pixels: np.ndarray, size: Tuple[int, int], method: str = 'bilinear') -> np.ndarray:
    """
    Resize a float H x W x C image to (height, width)

    Each channel goes through Pillow's 32-bit float mode, which keeps the
    resampling antialiased on downscale and deterministic.
    """
    height, width = size
    if pixels.shape[:2] == (height, width):
        return pixels.astype(np.float64, copy=True)
    resample = _RESAMPLERS[method]
    channels = [
        np.asarray(
            Image.fromarray(np.ascontiguousarray(pixels[..., c], dtype=np.float32), mode='F').resize(
                (width, height), resample=resample
            ),
            dtype=np.float64,
        )
        for c in range(pixels.shape[2])
    ]
    return np.stack(channels, axis=-1)


def center_crop_square(pixels: np.ndarray) -> np.ndarray:
    """Largest centered square of an H x W x C image"""
    height, width = pixels.shape[:2]
    side = min(height, width)
    top, left = (height - side) // 2, (width - side) // 2
    return pixels[top:top + side, left:left + side]


def read_image_size(path: PathLike) -> Tuple[int, int]:
    """
    (height, width) of an image without decoding its pixels

    Raises:
        DatasetError: file missing or not a recognised image
    """
    try:
        with Image.open(path) as img:
            width, height = img.size
            return height, width
    except (OSError, UnidentifiedImageError) as e:
        raise DatasetError(f"Cannot read image {path}: {e}") from e
