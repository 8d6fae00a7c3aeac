"""
Conditional patch discriminator, one per scale with the same architecture

Input is the condition (constrained equirect) and the candidate concatenated
channel-wise. Stride-2 4x4 blocks C64-C128-C256-C512 (no instance norm on the
first), leaky ReLU 0.2, then a 3x3 conv to one channel of patch logits.
"""
from typing import Dict, Tuple

import torch
import torch.nn as nn

from apps.core.exceptions import GeometryError
from apps.datasets.pyramid import SCALES

from .layers import WrapConv2d


def patch_grid(height: int, width: int, n_layers: int = 4) -> Tuple[int, int]:
    """Patch map size for an input of height x width"""
    for _ in range(n_layers):
        height = (height + 2 - 4) // 2 + 1
        width = (width + 2 - 4) // 2 + 1
    return height, width


def check_patch_grid(height: int, width: int, n_layers: int) -> Tuple[int, int]:
    """
    Raises:
        GeometryError: the input is too small to leave a patch after n_layers stride-2 blocks
    """
    grid = patch_grid(height, width, n_layers)
    if min(grid) < 1:
        raise GeometryError(f"{height}x{width} input is too small for a {n_layers}-layer patch discriminator")
    return grid


class PatchDiscriminator(nn.Module):
    def __init__(self, channels: int = 64, n_layers: int = 4, wrap: bool = True, slope: float = 0.2):
        super().__init__()
        self.n_layers = n_layers
        layers = []
        in_channels = 6
        for i in range(n_layers):
            out_channels = channels * min(2**i, 8)
            layers.append(WrapConv2d(in_channels, out_channels, kernel_size=4, stride=2, padding=1, wrap=wrap))
            if i > 0:
                layers.append(nn.InstanceNorm2d(out_channels))
            layers.append(nn.LeakyReLU(slope))
            in_channels = out_channels
        layers.append(WrapConv2d(in_channels, 1, kernel_size=3, stride=1, padding=1, wrap=wrap))
        self.model = nn.Sequential(*layers)

    @classmethod
    def from_config(cls, config) -> 'PatchDiscriminator':
        return cls(channels=config.disc_channels, n_layers=config.disc_layers, wrap=config.horizontal_wrap)

    def forward(self, condition: torch.Tensor, candidate: torch.Tensor) -> torch.Tensor:
        """
        Returns:
            (B, 1, N_h, N_w) patch logits, no sigmoid
        """
        if condition.shape != candidate.shape:
            raise GeometryError(
                f"Condition {tuple(condition.shape)} and candidate {tuple(candidate.shape)} differ in shape"
            )
        check_patch_grid(condition.shape[-2], condition.shape[-1], self.n_layers)
        return self.model(torch.cat([condition, candidate], dim=1))


def discriminator_forward(
    scale: str, condition: torch.Tensor, candidate: torch.Tensor, discriminators: Dict[str, PatchDiscriminator]
) -> torch.Tensor:
    if scale not in discriminators:
        raise GeometryError(f"No discriminator for scale '{scale}'")
    return discriminators[scale](condition, candidate)


def build_discriminators(config, scales=SCALES) -> nn.ModuleDict:
    return nn.ModuleDict({scale: PatchDiscriminator.from_config(config) for scale in scales})
