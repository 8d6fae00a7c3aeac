"""
Unified multiscale generator, patch discriminators, stage training and inference
"""
from .checkpoints import StageCheckpoint, unify
from .config import TrainConfig, load_train_config
from .discriminator import PatchDiscriminator, discriminator_forward, patch_grid
from .generator import UnifiedGenerator, downsample2x, group_checksums, upsample2x
from .inference import Synthesizer, infer
from .losses import adversarial_losses, pixel_loss, total_loss
from .training import train_stage

__all__ = [
    'PatchDiscriminator',
    'StageCheckpoint',
    'Synthesizer',
    'TrainConfig',
    'UnifiedGenerator',
    'adversarial_losses',
    'discriminator_forward',
    'downsample2x',
    'group_checksums',
    'infer',
    'load_train_config',
    'patch_grid',
    'pixel_loss',
    'total_loss',
    'train_stage',
    'unify',
    'upsample2x',
]
