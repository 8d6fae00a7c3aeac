"""
torch Dataset over one split of a built dataset
"""
import logging
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import torch
from django.conf import settings
from torch.utils.data import Dataset

from apps.core.exceptions import DatasetError
from apps.fov.classes import FovClassSpec
from apps.fov.constrain import constrain_views
from apps.fov.network import views_to_tensor
from apps.geometry.types import ViewSet

from .manifest import DatasetManifest, ManifestRecord
from .pyramid import SCALES, scale_height
from .samples import load_ground_truth, load_views

logger = logging.getLogger(__name__)


def to_chw(img: np.ndarray) -> torch.Tensor:
    return torch.from_numpy(np.ascontiguousarray(np.transpose(img, (2, 0, 1)), dtype=np.float32))


def constrained_inputs(
    views: ViewSet,
    fov_deg: float,
    scales: Sequence[str],
    large_height: int,
    fill: float,
    law: str,
) -> Dict[str, torch.Tensor]:
    """constrain_views at every requested pyramid scale, as (3, h, 2h) tensors"""
    inputs = {}
    for scale in scales:
        height = scale_height(scale, large_height)
        pano = constrain_views(views, fov_deg, face_size=height, fill=fill, height=height, law=law)
        inputs[scale] = to_chw(pano.pixels)
    return inputs


class PanoramaPairs(Dataset):
    """
    Views, fov label, ground-truth levels and constrained inputs of each record

    Constrained inputs use the record's ground-truth fov. The most recent
    memory_items of them are kept in memory and, with PANO360_CACHE set, all
    of them as .npy files on disk.
    """

    def __init__(
        self,
        manifest: DatasetManifest,
        split: str = 'train',
        scales: Sequence[str] = SCALES,
        fov_spec: Optional[FovClassSpec] = None,
        cache_dir: Optional[Path] = None,
        memory_items: int = 64,
    ):
        self.manifest = manifest
        self.records = manifest.split(split)
        if not self.records:
            raise DatasetError(f"Split '{split}' of {manifest.root} is empty")
        self.scales = tuple(scales)
        self.fov_spec = fov_spec or FovClassSpec.from_settings()
        cache = cache_dir if cache_dir is not None else getattr(settings, 'PANO360_CACHE', None)
        self.cache_dir = Path(cache) / 'constrained' if cache else None
        self.memory_items = memory_items
        self._memory: "OrderedDict[Tuple[str, str], torch.Tensor]" = OrderedDict()

    def __len__(self) -> int:
        return len(self.records)

    def _cache_file(self, record: ManifestRecord, scale: str) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        m = self.manifest
        name = f"{record.id}_{scale}_{m.large_height}_{record.fov_deg:g}_{m.fov_law}_{m.fill_value:g}.npy"
        return self.cache_dir / name

    def _constrained(self, record: ManifestRecord, views: ViewSet, scale: str) -> torch.Tensor:
        key = (record.id, scale)
        if key in self._memory:
            self._memory.move_to_end(key)
            return self._memory[key]
        path = self._cache_file(record, scale)
        if path is not None and path.exists():
            tensor = torch.from_numpy(np.load(path))
        else:
            m = self.manifest
            tensor = constrained_inputs(views, record.fov_deg, (scale,), m.large_height, m.fill_value, m.fov_law)[scale]
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                np.save(path, tensor.numpy())
        if self.memory_items > 0:
            self._memory[key] = tensor
            while len(self._memory) > self.memory_items:
                self._memory.popitem(last=False)
        return tensor

    def __getitem__(self, index: int) -> dict:
        record = self.records[index]
        directory = self.manifest.record_dir(record)
        views = load_views(directory)
        return {
            'id': record.id,
            'fov': record.fov_deg,
            'label': self.fov_spec.class_of(record.fov_deg),
            'views': views_to_tensor(views),
            'inputs': {scale: self._constrained(record, views, scale) for scale in self.scales},
            'targets': {scale: to_chw(load_ground_truth(directory, scale)) for scale in self.scales},
        }
