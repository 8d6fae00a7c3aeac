"""
Unified hierarchical generator

Each scale has an input bridge (RGB -> base channels), a core and an output
bridge (base channels -> RGB). The small core is an encoder-decoder with skip
connections; medium and large cores are residual blocks whose output is added
to the upsampled output of the scale below:

    out_s = tanh(G_s(x_s))
    out_m = hardtanh(G_m(x_m) + up(out_s))
    out_l = hardtanh(G_l(x_l) + up(out_m))
"""
import hashlib
import logging
from typing import Dict, Iterator, List, Optional

import torch
import torch.nn as nn
import torch.nn.functional as F

from apps.core.exceptions import CheckpointError, GeometryError
from apps.datasets.pyramid import SCALE_NAMES, SCALES

from .layers import ResidualBlock, WrapConv2d, conv_block

logger = logging.getLogger(__name__)

GROUP_KINDS = ('in_bridge', 'core', 'out_bridge')
MODULE_DICTS = {'in_bridge': 'in_bridges', 'core': 'cores', 'out_bridge': 'out_bridges'}


def upsample2x(img: torch.Tensor) -> torch.Tensor:
    """Fixed bilinear x2 upsampling of a (B, C, H, W) tensor"""
    return F.interpolate(img, scale_factor=2, mode='bilinear', align_corners=False)


def downsample2x(img: torch.Tensor) -> torch.Tensor:
    """2x2 area mean; H and W must be even"""
    if img.shape[-1] % 2 or img.shape[-2] % 2:
        raise GeometryError(f"downsample2x needs even dimensions, got {tuple(img.shape[-2:])}")
    return F.avg_pool2d(img, kernel_size=2)


def stage_scale(stage: str) -> str:
    """'small' -> 's'; scale letters pass through"""
    if stage in SCALES:
        return stage
    try:
        return SCALE_NAMES[stage]
    except KeyError:
        raise GeometryError(f"Unknown stage '{stage}'; expected one of {', '.join(SCALE_NAMES)}") from None


def group_name(kind: str, scale: str) -> str:
    return f'{kind}_{scale}'


class UNetCore(nn.Module):
    """Encoder-decoder on base-channel features, skip connection at each level"""

    def __init__(self, channels: int = 64, depth: int = 4, skip_connections: bool = True, wrap: bool = True):
        super().__init__()
        self.depth = depth
        self.skip_connections = skip_connections
        widths = [channels * min(2**i, 8) for i in range(depth + 1)]

        self.down = nn.ModuleList(conv_block(widths[i], widths[i + 1], stride=2, wrap=wrap) for i in range(depth))
        self.bottleneck = conv_block(widths[depth], widths[depth], wrap=wrap)
        self.up = nn.ModuleList(
            nn.ConvTranspose2d(widths[i + 1], widths[i], kernel_size=2, stride=2) for i in range(depth)
        )
        merge = 2 if skip_connections else 1
        self.merge = nn.ModuleList(conv_block(widths[i] * merge, widths[i], wrap=wrap) for i in range(depth))

    def forward(self, x):
        if x.shape[-2] % (2**self.depth) or x.shape[-1] % (2**self.depth):
            raise GeometryError(
                f"Encoder of depth {self.depth} needs sizes divisible by {2**self.depth}, got {tuple(x.shape[-2:])}"
            )
        skips = []
        for block in self.down:
            skips.append(x)
            x = block(x)
        x = self.bottleneck(x)
        for i in reversed(range(self.depth)):
            x = self.up[i](x)
            if self.skip_connections:
                x = torch.cat([x, skips[i]], dim=1)
            x = self.merge[i](x)
        return x


class ResidualCore(nn.Sequential):
    def __init__(self, channels: int = 64, blocks: int = 3, wrap: bool = True):
        super().__init__(*(ResidualBlock(channels, wrap=wrap) for _ in range(blocks)))


class UnifiedGenerator(nn.Module):
    """
    Generator holding the parameter groups of every scale up to ``stage``

    Parameter names are ``in_bridges.<s|m|l>.*``, ``cores.<s|m|l>.*`` and
    ``out_bridges.<s|m|l>.*``, so a lower-stage state dict loads unchanged
    into a larger generator.
    """

    def __init__(
        self,
        stage: str = 'small',
        base_channels: int = 64,
        unet_depth: int = 4,
        residual_blocks: int = 3,
        skip_connections: bool = True,
        horizontal_wrap: bool = True,
    ):
        super().__init__()
        self.top_scale = stage_scale(stage)
        self.base_channels = base_channels
        self.horizontal_wrap = horizontal_wrap
        self.in_bridges = nn.ModuleDict()
        self.cores = nn.ModuleDict()
        self.out_bridges = nn.ModuleDict()
        for scale in self.scales:
            self.in_bridges[scale] = nn.Sequential(
                WrapConv2d(3, base_channels, wrap=horizontal_wrap),
                nn.LeakyReLU(0.2),
            )
            if scale == 's':
                self.cores[scale] = UNetCore(base_channels, unet_depth, skip_connections, horizontal_wrap)
            else:
                self.cores[scale] = ResidualCore(base_channels, residual_blocks, horizontal_wrap)
            self.out_bridges[scale] = WrapConv2d(base_channels, 3, wrap=horizontal_wrap)

    @classmethod
    def from_config(cls, config, stage: str = 'small') -> 'UnifiedGenerator':
        return cls(
            stage=stage,
            base_channels=config.base_channels,
            unet_depth=config.unet_depth,
            residual_blocks=config.residual_blocks,
            skip_connections=config.skip_connections,
            horizontal_wrap=config.horizontal_wrap,
        )

    @property
    def scales(self):
        return SCALES[: SCALES.index(self.top_scale) + 1]

    def residual(self, scale: str, x: torch.Tensor) -> torch.Tensor:
        """G_scale(x): bridge -> core -> bridge, before composition"""
        return self.out_bridges[scale](self.cores[scale](self.in_bridges[scale](x)))

    def forward(self, inputs: Dict[str, torch.Tensor], stage: Optional[str] = None) -> Dict[str, torch.Tensor]:
        """
        Args:
            inputs: constrained equirect tensors (B, 3, h, 2h) keyed by scale,
                covering every scale up to the stage
            stage: defaults to the generator's top stage

        Returns:
            outputs keyed by scale, each in [-1, 1]

        Raises:
            CheckpointError: stage above the groups this generator holds
            GeometryError: missing input or resolution mismatch
        """
        top = stage_scale(stage) if stage else self.top_scale
        if SCALES.index(top) > SCALES.index(self.top_scale):
            raise CheckpointError(
                f"Generator holds groups through '{self.top_scale}' only; stage '{top}' needs lower stages unified first"
            )
        check_input_resolutions(inputs, SCALES[: SCALES.index(top) + 1])

        outputs = {}
        previous = None
        for scale in SCALES[: SCALES.index(top) + 1]:
            residual = self.residual(scale, inputs[scale])
            if previous is None:
                out = torch.tanh(residual)
            else:
                out = F.hardtanh(residual + upsample2x(previous))
            outputs[scale] = out
            previous = out
        return outputs

    def group_modules(self) -> Dict[str, nn.Module]:
        groups = {}
        for scale in self.scales:
            for kind in GROUP_KINDS:
                groups[group_name(kind, scale)] = getattr(self, MODULE_DICTS[kind])[scale]
        return groups

    def stage_parameters(self, scale: str) -> Iterator[nn.Parameter]:
        """Parameters of one scale's bridges and core"""
        scale = stage_scale(scale)
        for kind in GROUP_KINDS:
            yield from getattr(self, MODULE_DICTS[kind])[scale].parameters()

    def freeze_below(self, scale: str) -> List[str]:
        """Stop gradients into every group under ``scale``; returns the frozen group names"""
        scale = stage_scale(scale)
        frozen = []
        for name, module in self.group_modules().items():
            below = SCALES.index(name[-1]) < SCALES.index(scale)
            for param in module.parameters():
                param.requires_grad_(not below)
            if below:
                frozen.append(name)
        return frozen


def check_input_resolutions(inputs: Dict[str, torch.Tensor], scales) -> None:
    previous = None
    for scale in scales:
        if scale not in inputs:
            raise GeometryError(f"Missing generator input for scale '{scale}'")
        x = inputs[scale]
        if x.dim() != 4 or x.shape[1] != 3 or x.shape[-1] != 2 * x.shape[-2]:
            raise GeometryError(f"Input '{scale}' must be (B, 3, h, 2h), got {tuple(x.shape)}")
        if previous is not None and tuple(x.shape[-2:]) != (2 * previous[0], 2 * previous[1]):
            raise GeometryError(
                f"Input '{scale}' is {tuple(x.shape[-2:])}, expected twice the lower scale {tuple(previous)}"
            )
        previous = tuple(x.shape[-2:])


def group_checksums(module: nn.Module) -> Dict[str, str]:
    """
    SHA-256 of every parameter group's tensors, keyed by group name
    (``in_bridge_s``, ``core_m`` ...). Works on any module exposing
    ``group_modules``.
    """
    checksums = {}
    for name, group in module.group_modules().items():
        digest = hashlib.sha256()
        for key, tensor in sorted(group.state_dict().items()):
            digest.update(key.encode())
            digest.update(tensor.detach().cpu().contiguous().numpy().tobytes())
        checksums[name] = digest.hexdigest()
    return checksums


def parameter_count(module: nn.Module) -> int:
    return sum(p.numel() for p in module.parameters())
