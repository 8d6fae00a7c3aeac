"""
Domain types for spherical images
"""
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from apps.core.exceptions import GeometryError

# Fixed, serialized order of the cube faces
FACE_KEYS: Tuple[str, ...] = ('north', 'west', 'south', 'east', 'up', 'down')
SIDE_FACES: Tuple[str, ...] = FACE_KEYS[:4]

# (yaw, pitch) in degrees of each face's principal ray; yaw grows toward west
FACE_ORIENTATION: Dict[str, Tuple[float, float]] = {
    'north': (0.0, 0.0),
    'west': (90.0, 0.0),
    'south': (180.0, 0.0),
    'east': (270.0, 0.0),
    'up': (0.0, 90.0),
    'down': (0.0, -90.0),
}

VALUE_RANGES = ('uint8', 'normalized')


@dataclass(frozen=True)
class Direction:
    """Unit view ray; y points up, z toward the north view center, x toward west"""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = float(np.sqrt(self.x**2 + self.y**2 + self.z**2))
        if abs(norm - 1.0) > 1e-9:
            raise GeometryError(f"Direction must be unit length, got norm {norm:.12f}")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)


def _check_rgb(pixels: np.ndarray, what: str) -> None:
    if pixels.ndim != 3 or pixels.shape[2] != 3:
        raise GeometryError(f"{what} must be H x W x 3, got shape {pixels.shape}")


@dataclass(frozen=True)
class EquirectPanorama:
    """
    Full-sphere image, azimuth along columns and elevation along rows

    The north view center sits at the horizontal center of the image.
    """

    pixels: np.ndarray
    value_range: str = 'normalized'

    def __post_init__(self):
        _check_rgb(self.pixels, 'Panorama')
        height, width = self.pixels.shape[:2]
        if width != 2 * height:
            raise GeometryError(f"Equirectangular panorama needs W = 2H, got {height}x{width}")
        if self.value_range not in VALUE_RANGES:
            raise GeometryError(f"Unknown value range '{self.value_range}'")
        if self.value_range == 'normalized' and self.pixels.size:
            lo, hi = float(self.pixels.min()), float(self.pixels.max())
            if lo < -1.0 - 1e-6 or hi > 1.0 + 1e-6:
                raise GeometryError(f"Normalized panorama values out of [-1, 1]: [{lo}, {hi}]")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True)
class CubeMapFaces:
    """Six square faces keyed in FACE_KEYS order"""

    faces: Dict[str, np.ndarray]

    def __post_init__(self):
        if tuple(self.faces.keys()) != FACE_KEYS:
            raise GeometryError(f"Cube faces must be keyed {FACE_KEYS}, got {tuple(self.faces.keys())}")
        sizes = set()
        for key, face in self.faces.items():
            _check_rgb(face, f"Face '{key}'")
            if face.shape[0] != face.shape[1]:
                raise GeometryError(f"Face '{key}' is not square: {face.shape}")
            sizes.add(face.shape[0])
        if len(sizes) != 1:
            raise GeometryError(f"Cube faces have mixed sizes {sorted(sizes)}")

    @property
    def face_size(self) -> int:
        return self.faces[FACE_KEYS[0]].shape[0]

    @classmethod
    def from_sequence(cls, faces) -> 'CubeMapFaces':
        return cls(dict(zip(FACE_KEYS, faces)))


@dataclass(frozen=True)
class ViewSet:
    """The four compass-rose views, ordered north, west, south, east"""

    views: Tuple[np.ndarray, ...]
    fov_deg: Optional[float] = field(default=None)

    def __post_init__(self):
        if len(self.views) != 4:
            raise GeometryError(f"A view set holds exactly 4 views, got {len(self.views)}")
        shapes = set()
        for i, view in enumerate(self.views):
            _check_rgb(view, f"View {SIDE_FACES[i]}")
            if view.shape[0] != view.shape[1]:
                raise GeometryError(f"View {SIDE_FACES[i]} is not square: {view.shape}")
            shapes.add(view.shape)
        if len(shapes) != 1:
            raise GeometryError(f"Views must share one size, got {sorted(shapes)}")
        if self.fov_deg is not None and not 0.0 < self.fov_deg <= 90.0:
            raise GeometryError(f"View set fov must be in (0, 90], got {self.fov_deg}")

    @property
    def view_size(self) -> int:
        return self.views[0].shape[0]
