"""
Convolution building blocks shared by generator and discriminator
"""
import torch
import torch.nn as nn
import torch.nn.functional as F


class WrapConv2d(nn.Module):
    """
    Conv2d whose width padding wraps around (equirect azimuth is periodic)
    while the height is zero padded. With wrap off it is a plain padded conv.
    """

    def __init__(self, in_channels, out_channels, kernel_size=3, stride=1, padding=1, wrap=True, bias=True):
        super().__init__()
        self.padding = padding
        self.wrap = wrap
        self.conv = nn.Conv2d(
            in_channels,
            out_channels,
            kernel_size=kernel_size,
            stride=stride,
            padding=0 if wrap else padding,
            bias=bias,
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if self.wrap and self.padding:
            p = self.padding
            x = F.pad(x, (p, p, 0, 0), mode='circular')
            x = F.pad(x, (0, 0, p, p), mode='constant', value=0.0)
        return self.conv(x)


def conv_block(in_channels, out_channels, *, stride=1, kernel_size=3, padding=1, wrap=True, norm=True, slope=0.2):
    layers = [WrapConv2d(in_channels, out_channels, kernel_size, stride, padding, wrap=wrap)]
    if norm:
        layers.append(nn.InstanceNorm2d(out_channels, affine=True))
    layers.append(nn.LeakyReLU(slope) if slope else nn.ReLU())
    return nn.Sequential(*layers)


class ResidualBlock(nn.Module):
    def __init__(self, channels: int, wrap: bool = True):
        super().__init__()
        self.body = nn.Sequential(
            WrapConv2d(channels, channels, wrap=wrap),
            nn.InstanceNorm2d(channels, affine=True),
            nn.ReLU(),
            WrapConv2d(channels, channels, wrap=wrap),
            nn.InstanceNorm2d(channels, affine=True),
        )

    def forward(self, x):
        return x + self.body(x)
