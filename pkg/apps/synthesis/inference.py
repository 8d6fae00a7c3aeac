"""
Four views in, one equirect panorama out
"""
import logging
from typing import Optional, Tuple, Union

import numpy as np
import torch

from apps.core.imaging import resize_image
from apps.core.seeding import get_device
from apps.datasets.loader import constrained_inputs
from apps.datasets.normalization import denormalize
from apps.datasets.pyramid import scales_through
from apps.fov.network import fov_forward, views_to_tensor
from apps.geometry.types import EquirectPanorama, ViewSet

from .checkpoints import StageCheckpoint
from .generator import stage_scale

logger = logging.getLogger(__name__)


class Synthesizer:
    """
    Checkpoint networks loaded once and reused across view sets

    Without a known fov the classifier picks it; the views are then embedded
    at every pyramid scale up to the stage and run through the generator.
    """

    def __init__(self, ckpt: Union[StageCheckpoint, str], stage: Optional[str] = None, device=None):
        self.ckpt = ckpt if isinstance(ckpt, StageCheckpoint) else StageCheckpoint.load(ckpt)
        self.scale = stage_scale(stage or self.ckpt.stage)
        self.device = device or get_device()
        self.generator = self.ckpt.build_generator(self.scale).to(self.device).eval()
        self.spec = self.ckpt.fov_spec()
        self._fov_model = None
        data = self.ckpt.data
        self.large_height = int(data['large_height'])
        self.view_size = int(data['view_size'])
        self.fill = float(data['fill_value'])
        self.law = data['fov_law']

    @property
    def fov_model(self):
        if self._fov_model is None:
            self._fov_model = self.ckpt.build_fov().to(self.device).eval()
        return self._fov_model

    def predict_fov(self, views: ViewSet) -> float:
        if views.view_size != self.view_size:
            views = ViewSet(tuple(resize_image(v, (self.view_size, self.view_size)) for v in views.views))
        return fov_forward(views_to_tensor(views), self.fov_model, self.spec).predicted_fov

    @torch.no_grad()
    def __call__(self, views: ViewSet, fov_deg: Optional[float] = None) -> Tuple[EquirectPanorama, float]:
        if fov_deg is None:
            fov_deg = self.predict_fov(views)
        scales = scales_through(self.scale)
        inputs = constrained_inputs(views, fov_deg, scales, self.large_height, self.fill, self.law)
        batch = {scale: tensor.unsqueeze(0).to(self.device) for scale, tensor in inputs.items()}
        output = self.generator(batch)[self.scale][0]
        pixels = np.transpose(output.detach().cpu().numpy().astype(np.float64), (1, 2, 0))
        return EquirectPanorama(denormalize(pixels), value_range='uint8'), float(fov_deg)


def infer(
    views: ViewSet,
    ckpt: Union[StageCheckpoint, str],
    target_stage: Optional[str] = None,
    fov_deg: Optional[float] = None,
) -> EquirectPanorama:
    """
    Synthesize the panorama of four ordered normalized views

    Raises:
        CheckpointError: missing groups for the target stage, or no fov
            classifier when fov_deg is not given
    """
    synthesizer = Synthesizer(ckpt, target_stage)
    pano, used_fov = synthesizer(views, fov_deg)
    logger.info(
        "Synthesized %dx%d panorama at stage %s with fov %.1f (%s)",
        pano.height,
        pano.width,
        synthesizer.scale,
        used_fov,
        'given' if fov_deg is not None else 'predicted',
    )
    return pano
