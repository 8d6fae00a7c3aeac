"""
uint8 <-> [-1, 1] value mapping and fill-value resolution
"""
from typing import Union

import numpy as np

from apps.core.exceptions import ConfigError

FILL_PRESETS = {'gray': 0.0, 'black': -1.0}


def normalize(img: np.ndarray) -> np.ndarray:
    """Affine map 0 -> -1, 255 -> 1"""
    return np.asarray(img, dtype=np.float64) * (2.0 / 255.0) - 1.0


def denormalize(img: np.ndarray) -> np.ndarray:
    """Inverse of normalize, rounded and clipped to uint8"""
    scaled = (np.asarray(img, dtype=np.float64) + 1.0) * 127.5
    return np.clip(np.rint(scaled), 0, 255).astype(np.uint8)


def resolve_fill(value: Union[str, float]) -> float:
    """
    Turn a fill setting into a normalized value

    Accepts the presets 'gray' (0.0, zero information in [-1, 1]) and 'black'
    (-1.0), or any number in [-1, 1].
    """
    if isinstance(value, str):
        if value in FILL_PRESETS:
            return FILL_PRESETS[value]
        try:
            value = float(value)
        except ValueError:
            raise ConfigError(f"Fill must be 'gray', 'black' or a number in [-1, 1], got '{value}'")
    if not -1.0 <= float(value) <= 1.0:
        raise ConfigError(f"Fill value must lie in [-1, 1], got {value}")
    return float(value)
