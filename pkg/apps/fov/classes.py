"""
Field-of-view classes: the bins the classifier predicts
"""
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import ConfigError

DEFAULT_BIN_CENTERS = (45.0, 50.0, 55.0, 60.0, 65.0, 70.0, 75.0)


@dataclass(frozen=True)
class FovClassSpec:
    """Strictly increasing bin centers in [45, 90] degrees"""

    bin_centers: Tuple[float, ...] = DEFAULT_BIN_CENTERS

    def __post_init__(self):
        centers = tuple(float(c) for c in self.bin_centers)
        object.__setattr__(self, 'bin_centers', centers)
        if not centers:
            raise ConfigError("At least one fov bin is required")
        if any(not 45.0 <= c <= 90.0 for c in centers):
            raise ConfigError(f"fov bin centers must lie in [45, 90], got {centers}")
        if any(b <= a for a, b in zip(centers, centers[1:])):
            raise ConfigError(f"fov bin centers must be strictly increasing, got {centers}")

    @classmethod
    def from_settings(cls) -> 'FovClassSpec':
        return cls(tuple(getattr(settings, 'PANO360_FOV_BINS', DEFAULT_BIN_CENTERS)))

    @property
    def n_classes(self) -> int:
        return len(self.bin_centers)

    def class_of(self, fov_deg: float) -> int:
        """Nearest bin; lowest index on ties"""
        return int(np.argmin(np.abs(np.asarray(self.bin_centers) - fov_deg)))

    def center_of(self, index: int) -> float:
        if not 0 <= index < self.n_classes:
            raise ConfigError(f"fov class {index} out of range [0, {self.n_classes})")
        return self.bin_centers[index]

    def snap(self, fov_deg: float, within: Optional[Sequence[float]] = None) -> float:
        """
        Snap a fov to a bin center, optionally restricted to centers inside a range

        Raises:
            ConfigError: no bin center inside the requested range
        """
        centers = self._centers_within(within)
        return float(centers[int(np.argmin(np.abs(centers - fov_deg)))])

    def _centers_within(self, within: Optional[Iterable[float]]) -> np.ndarray:
        centers = np.asarray(self.bin_centers)
        if within is None:
            return centers
        lo, hi = within
        inside = centers[(centers >= lo) & (centers <= hi)]
        if not inside.size:
            raise ConfigError(f"No fov bin center inside [{lo}, {hi}]; bins are {self.bin_centers}")
        return inside
