"""
Synthesis objectives: conditional adversarial loss on patch logits, L1 pixel
loss and their weighted sum
"""
from typing import Tuple

import torch
import torch.nn.functional as F

from apps.core.exceptions import GeometryError


def _same_shape(a: torch.Tensor, b: torch.Tensor, what: str) -> None:
    if a.shape != b.shape:
        raise GeometryError(f"{what}: shapes {tuple(a.shape)} and {tuple(b.shape)} differ")


def pixel_loss(pred: torch.Tensor, gt: torch.Tensor) -> torch.Tensor:
    """Mean absolute difference over all pixels and channels"""
    _same_shape(pred, gt, 'pixel_loss')
    return F.l1_loss(pred, gt, reduction='mean')


def discriminator_loss(real_patch: torch.Tensor, fake_patch: torch.Tensor) -> torch.Tensor:
    """-mean log sigmoid(real) - mean log(1 - sigmoid(fake))"""
    _same_shape(real_patch, fake_patch, 'discriminator_loss')
    real = F.binary_cross_entropy_with_logits(real_patch, torch.ones_like(real_patch))
    fake = F.binary_cross_entropy_with_logits(fake_patch, torch.zeros_like(fake_patch))
    return real + fake


def generator_loss(fake_patch: torch.Tensor) -> torch.Tensor:
    """Non-saturating form: -mean log sigmoid(fake)"""
    return F.binary_cross_entropy_with_logits(fake_patch, torch.ones_like(fake_patch))


def adversarial_losses(real_patch: torch.Tensor, fake_patch: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
    return discriminator_loss(real_patch, fake_patch), generator_loss(fake_patch)


def total_loss(adv_g, pix, lambda_pix: float):
    return adv_g + lambda_pix * pix
