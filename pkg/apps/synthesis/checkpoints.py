"""
Stage checkpoints and stage unification

A checkpoint is a torch.save'd dict with a format header, so loading works
with ``weights_only=True``. Writes go to a temporary file first and are moved
into place with ``os.replace``.
"""
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

import torch

from apps.core.exceptions import CheckpointError
from apps.datasets.pyramid import SCALES
from apps.fov.classes import FovClassSpec
from apps.fov.network import FovEstimator

from .config import TrainConfig
from .generator import GROUP_KINDS, MODULE_DICTS, UnifiedGenerator, group_name, stage_scale

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = 'pano360-stage'
CHECKPOINT_VERSION = 1


def _groups_in(state: Dict[str, torch.Tensor]) -> Dict[str, Dict]:
    """Group metadata (parameter shapes, owning scale) from a generator state dict"""
    prefixes = {f'{MODULE_DICTS[kind]}.{scale}.': group_name(kind, scale) for kind in GROUP_KINDS for scale in SCALES}
    groups = {}
    for key, tensor in state.items():
        for prefix, name in prefixes.items():
            if key.startswith(prefix):
                entry = groups.setdefault(name, {'scale': name[-1], 'shapes': {}})
                entry['shapes'][key[len(prefix):]] = list(tensor.shape)
    return groups


@dataclass
class StageCheckpoint:
    stage: str
    generator: Dict[str, torch.Tensor]
    config: Dict
    data: Dict
    step: int = 0
    discriminators: Dict[str, Dict[str, torch.Tensor]] = field(default_factory=dict)
    fov: Optional[Dict[str, torch.Tensor]] = None
    optimizers: Dict[str, Dict] = field(default_factory=dict)
    version: int = CHECKPOINT_VERSION

    @property
    def scale(self) -> str:
        return stage_scale(self.stage)

    @property
    def groups(self) -> Dict[str, Dict]:
        return _groups_in(self.generator)

    def train_config(self) -> TrainConfig:
        return TrainConfig(**self.config)

    def fov_spec(self) -> FovClassSpec:
        return FovClassSpec(tuple(self.data['fov_bins']))

    def build_generator(self, stage: Optional[str] = None) -> UnifiedGenerator:
        """Generator with this checkpoint's weights (through ``stage``, default its own)"""
        scale = stage_scale(stage or self.stage)
        self.require_groups(SCALES[: SCALES.index(scale) + 1])
        model = UnifiedGenerator.from_config(self.train_config(), stage=scale)
        prefixes = tuple(f'{MODULE_DICTS[k]}.{s}.' for k in GROUP_KINDS for s in model.scales)
        state = {k: v for k, v in self.generator.items() if k.startswith(prefixes)}
        _load_strict(model, state, 'generator')
        return model

    def build_fov(self) -> FovEstimator:
        if self.fov is None:
            raise CheckpointError(f"Checkpoint of stage '{self.stage}' carries no fov classifier")
        config = self.train_config()
        model = FovEstimator(n_classes=len(self.data['fov_bins']), channels=config.fov_channels)
        _load_strict(model, self.fov, 'fov classifier')
        return model

    def require_groups(self, scales) -> None:
        present = self.groups
        missing = [group_name(k, s) for s in scales for k in GROUP_KINDS if group_name(k, s) not in present]
        if missing:
            raise CheckpointError(f"Checkpoint of stage '{self.stage}' is missing parameter groups: {', '.join(missing)}")

    def to_dict(self) -> Dict:
        return {
            'format': CHECKPOINT_FORMAT,
            'version': self.version,
            'stage': self.stage,
            'step': self.step,
            'generator': self.generator,
            'groups': self.groups,
            'discriminators': self.discriminators,
            'fov': self.fov,
            'optimizers': self.optimizers,
            'config': self.config,
            'data': self.data,
        }

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + '.tmp')
        try:
            torch.save(self.to_dict(), tmp)
            os.replace(tmp, path)
        except OSError as e:
            raise CheckpointError(f"Failed to write checkpoint {path}: {e}") from e
        logger.info("Checkpoint written: %s (stage=%s, step=%d)", path, self.stage, self.step)
        return path

    @classmethod
    def load(cls, path) -> 'StageCheckpoint':
        """
        Raises:
            CheckpointError: missing/unreadable file, wrong format or version
        """
        path = Path(path)
        if not path.is_file():
            raise CheckpointError(f"Checkpoint not found: {path}")
        try:
            payload = torch.load(path, map_location='cpu', weights_only=True)
        except Exception as e:
            raise CheckpointError(f"Unreadable checkpoint {path}: {e}") from e
        if not isinstance(payload, dict) or payload.get('format') != CHECKPOINT_FORMAT:
            raise CheckpointError(f"Not a pano360 stage checkpoint: {path}")
        if payload.get('version') != CHECKPOINT_VERSION:
            raise CheckpointError(f"Unsupported checkpoint version {payload.get('version')} in {path}")
        return cls(
            stage=payload['stage'],
            generator=payload['generator'],
            config=payload['config'],
            data=payload['data'],
            step=int(payload['step']),
            discriminators=payload.get('discriminators') or {},
            fov=payload.get('fov'),
            optimizers=payload.get('optimizers') or {},
            version=payload['version'],
        )


def _load_strict(model: torch.nn.Module, state: Dict[str, torch.Tensor], what: str) -> None:
    try:
        model.load_state_dict(state, strict=True)
    except RuntimeError as e:
        raise CheckpointError(f"Checkpoint {what} does not match the configured network: {e}") from e


def unify(lower_ckpt: StageCheckpoint, next_stage: str) -> UnifiedGenerator:
    """
    Generator for next_stage with every lower group copied verbatim from the
    checkpoint and the next stage's groups freshly initialised

    Raises:
        CheckpointError: a lower group is missing, or shapes do not match
    """
    scale = stage_scale(next_stage)
    lower = SCALES[: SCALES.index(scale)]
    if not lower:
        raise CheckpointError("The small stage has no lower stage to unify with")
    lower_ckpt.require_groups(lower)

    model = UnifiedGenerator.from_config(lower_ckpt.train_config(), stage=scale)
    prefixes = tuple(f'{MODULE_DICTS[k]}.{s}.' for k in GROUP_KINDS for s in lower)
    state = {k: v for k, v in lower_ckpt.generator.items() if k.startswith(prefixes)}
    try:
        result = model.load_state_dict(state, strict=False)
    except RuntimeError as e:
        raise CheckpointError(f"Lower-stage weights do not fit the unified generator: {e}") from e
    stray = [k for k in result.missing_keys if k.startswith(prefixes)]
    if stray or result.unexpected_keys:
        raise CheckpointError(f"Unification mismatch: missing {stray}, unexpected {result.unexpected_keys}")
    logger.info("Unified %s into a %s-stage generator", ', '.join(lower), next_stage)
    return model
