"""
Cube-map vs equirect output format, measured at the cube face seams

Two tiny small-scale generators are fitted with the pixel loss only: one on
the six constrained cube faces (one shared network, no wrap padding), one on
the constrained equirect input (wrap padding on). The cube output is warped
back to equirect; discontinuities at the face boundaries show up as a large
horizontal gradient there.
"""
import logging
from dataclasses import dataclass

import numpy as np
import torch

from apps.core.seeding import seed_everything
from apps.datasets.loader import to_chw
from apps.datasets.samples import generate_sample
from apps.fov.constrain import constrain_views
from apps.geometry.cubemap import cubemap_to_equirect, equirect_to_cubemap, face_boundary_mask
from apps.geometry.types import FACE_KEYS, SIDE_FACES, CubeMapFaces, EquirectPanorama, ViewSet
from apps.geometry.views import embed_view_with_fov

from .generator import UnifiedGenerator
from .losses import pixel_loss

logger = logging.getLogger(__name__)

SEAM_BAND_DEG = 45.0


@dataclass(frozen=True)
class SeamDemo:
    cubemap_warped: EquirectPanorama
    equirect: EquirectPanorama
    cubemap_score: float
    equirect_score: float


def _faces_tensor(faces: CubeMapFaces) -> torch.Tensor:
    return torch.stack([to_chw(faces.faces[key]) for key in FACE_KEYS])


def _fit(model: UnifiedGenerator, inputs: torch.Tensor, targets: torch.Tensor, steps: int, lr: float) -> float:
    optimizer = torch.optim.Adam(model.parameters(), lr=lr, betas=(0.5, 0.99))
    loss = torch.tensor(float('nan'))
    for _ in range(steps):
        pred = torch.tanh(model.residual('s', inputs))
        loss = pixel_loss(pred, targets)
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
    return float(loss.item())


def _to_numpy(t: torch.Tensor) -> np.ndarray:
    return np.transpose(t.detach().cpu().numpy().astype(np.float64), (1, 2, 0))


def train_cubemap_model(
    views: ViewSet,
    fov_deg: float,
    target: EquirectPanorama,
    steps: int = 300,
    fill: float = 0.0,
    channels: int = 16,
    depth: int = 3,
    lr: float = 2e-4,
    law: str = 'tangent',
) -> EquirectPanorama:
    """Fit on cube faces, predict all six and warp back to equirect at the target height"""
    size = target.height
    faces = {key: embed_view_with_fov(v, fov_deg, size, fill, law) for key, v in zip(SIDE_FACES, views.views)}
    faces['up'] = np.full((size, size, 3), fill)
    faces['down'] = np.full((size, size, 3), fill)
    inputs = _faces_tensor(CubeMapFaces(faces))
    targets = _faces_tensor(equirect_to_cubemap(target, size))

    model = UnifiedGenerator('small', base_channels=channels, unet_depth=depth, horizontal_wrap=False)
    final = _fit(model, inputs, targets, steps, lr)
    logger.info("Cube-map model fitted: pixel loss %.4f after %d steps", final, steps)
    with torch.no_grad():
        pred = torch.tanh(model.residual('s', inputs))
    predicted = CubeMapFaces({key: np.clip(_to_numpy(pred[i]), -1, 1) for i, key in enumerate(FACE_KEYS)})
    return cubemap_to_equirect(predicted, size)


def train_equirect_model(
    views: ViewSet,
    fov_deg: float,
    target: EquirectPanorama,
    steps: int = 300,
    fill: float = 0.0,
    channels: int = 16,
    depth: int = 3,
    lr: float = 2e-4,
    law: str = 'tangent',
) -> EquirectPanorama:
    """Fit on the constrained equirect input directly, wrap padding on"""
    size = target.height
    inputs = to_chw(constrain_views(views, fov_deg, size, fill, size, law).pixels).unsqueeze(0)
    targets = to_chw(target.pixels).unsqueeze(0)

    model = UnifiedGenerator('small', base_channels=channels, unet_depth=depth, horizontal_wrap=True)
    final = _fit(model, inputs, targets, steps, lr)
    logger.info("Equirect model fitted: pixel loss %.4f after %d steps", final, steps)
    with torch.no_grad():
        pred = torch.tanh(model.residual('s', inputs))
    return EquirectPanorama(np.clip(_to_numpy(pred[0]), -1, 1))


def seam_score(pano: EquirectPanorama, band_deg: float = SEAM_BAND_DEG) -> float:
    """
    Mean absolute horizontal gradient on cube face boundaries over the mean
    everywhere else, within +-band_deg of the horizon. 1.0 means no seam.
    """
    pixels = np.asarray(pano.pixels, dtype=np.float64)
    height = pano.height
    grad = np.abs(np.roll(pixels, -1, axis=1) - pixels).mean(axis=2)
    elevation = 90.0 - (np.arange(height) + 0.5) * 180.0 / height
    band = np.broadcast_to((np.abs(elevation) <= band_deg)[:, None], grad.shape)
    boundary = face_boundary_mask(height)

    on_seam = grad[boundary & band]
    elsewhere = grad[~boundary & band]
    if not on_seam.size or not elsewhere.size:
        return 1.0
    base = float(elsewhere.mean())
    if base == 0.0:
        return 1.0 if float(on_seam.mean()) == 0.0 else float('inf')
    return float(on_seam.mean()) / base


def run_seam_demo(
    pano: EquirectPanorama,
    fov_deg: float,
    steps: int = 300,
    seed: int = 0,
    height: int = 64,
    view_size: int = 64,
    fill: float = 0.0,
    law: str = 'tangent',
) -> SeamDemo:
    sample = generate_sample(
        pano, fov_deg, record_id='seams', view_size=view_size, large_height=height, fov_range=(fov_deg, fov_deg)
    )
    target = EquirectPanorama(sample.gt_pyramid.large)

    seed_everything(seed)
    cube = train_cubemap_model(sample.views, fov_deg, target, steps=steps, fill=fill, law=law)
    seed_everything(seed)
    equi = train_equirect_model(sample.views, fov_deg, target, steps=steps, fill=fill, law=law)
    return SeamDemo(
        cubemap_warped=cube,
        equirect=equi,
        cubemap_score=seam_score(cube),
        equirect_score=seam_score(equi),
    )
