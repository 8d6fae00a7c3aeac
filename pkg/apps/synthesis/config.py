"""
Training configuration: a flat ``key = value`` text file validated by pydantic
"""
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from apps.core.exceptions import ConfigError
from apps.fov.network import FOV_CHANNELS

STAGES = ('small', 'medium', 'large')


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    lr: float = Field(0.0002, gt=0)
    beta1: float = Field(0.5, ge=0, lt=1)
    beta2: float = Field(0.99, ge=0, lt=1)
    batch_size: int = 1
    lambda_pix: float = Field(100.0, ge=0)
    steps_small: int = Field(2000, ge=0)
    steps_medium: int = Field(2000, ge=0)
    steps_large: int = Field(2000, ge=0)
    checkpoint_interval: int = Field(500, gt=0)
    seed: int = 0

    # network sizing
    base_channels: int = Field(64, gt=0)
    unet_depth: int = Field(4, ge=1)
    residual_blocks: int = Field(3, ge=0)
    skip_connections: bool = True
    horizontal_wrap: bool = True
    disc_channels: int = Field(64, gt=0)
    disc_layers: int = Field(4, ge=1)
    fov_channels: Tuple[int, ...] = FOV_CHANNELS

    @field_validator('batch_size')
    @classmethod
    def batch_of_one(cls, value):
        if value != 1:
            raise ValueError('batch_size must be 1')
        return value

    @field_validator('fov_channels', mode='before')
    @classmethod
    def split_channels(cls, value):
        if isinstance(value, str):
            return tuple(int(part) for part in value.split(',') if part.strip())
        return value

    def steps_for(self, stage: str) -> int:
        return getattr(self, f'steps_{stage}')

    def echo(self) -> Dict[str, Union[str, int, float, bool]]:
        data = self.model_dump()
        data['fov_channels'] = ','.join(str(c) for c in self.fov_channels)
        return data


def parse_train_config(text: str, source: str = '<config>') -> TrainConfig:
    """
    Raises:
        ConfigError: malformed line, duplicate key, unknown key or bad value
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key '{key}'")
        values[key] = value
    try:
        return TrainConfig(**values)
    except ValidationError as e:
        problems = '; '.join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"{source}: {problems}") from e


def load_train_config(path: Optional[Union[str, Path]]) -> TrainConfig:
    if path is None:
        return TrainConfig()
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"Config file not readable: {path}") from e
    return parse_train_config(text, source=str(path))
