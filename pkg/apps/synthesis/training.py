"""
Stage-wise adversarial training

One discriminator step then one generator step per sample. At the small
stage the fov classifier is trained alongside with its own optimizer. Lower
generator groups stay frozen at the medium and large stages.
"""
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
import torch

from apps.core.exceptions import CheckpointError, ConfigError, GeometryError, TrainingAborted
from apps.core.seeding import get_device, seed_everything
from apps.datasets.loader import PanoramaPairs
from apps.datasets.manifest import DatasetManifest
from apps.datasets.pyramid import SCALES, scale_height, scales_through
from apps.fov.classes import FovClassSpec
from apps.fov.network import FovEstimator, fov_loss

from .checkpoints import StageCheckpoint, unify
from .config import STAGES, TrainConfig
from .discriminator import PatchDiscriminator, check_patch_grid
from .generator import UnifiedGenerator, stage_scale
from .losses import discriminator_loss, generator_loss, pixel_loss, total_loss

logger = logging.getLogger(__name__)

LOSS_COLUMNS = ['step', 'd_loss', 'g_adv', 'pix', 'fov_ce', 'total']
ARCHITECTURE_FIELDS = (
    'base_channels',
    'unet_depth',
    'residual_blocks',
    'skip_connections',
    'horizontal_wrap',
    'disc_channels',
    'disc_layers',
    'fov_channels',
)


def stage_name(stage: str) -> str:
    scale = stage_scale(stage)
    return STAGES[SCALES.index(scale)]


def loss_log_path(out_dir: Path, stage: str) -> Path:
    return Path(out_dir) / f'{stage_name(stage)}_losses.csv'


def sample_order(n: int, step: int, seed: int) -> int:
    """Record index used at a step: a fresh seeded permutation per pass over the data"""
    epoch, offset = divmod(step, n)
    return int(np.random.default_rng([seed, epoch]).permutation(n)[offset])


def _cpu_state(module: torch.nn.Module) -> Dict[str, torch.Tensor]:
    return {k: v.detach().cpu().clone() for k, v in module.state_dict().items()}


def _check_architecture(config: TrainConfig, init: StageCheckpoint) -> None:
    previous = init.train_config()
    changed = [f for f in ARCHITECTURE_FIELDS if getattr(config, f) != getattr(previous, f)]
    if changed:
        raise ConfigError(f"Network sizing differs from the init checkpoint: {', '.join(changed)}")


class StageTrainer:
    """Holds the networks and optimizers of one stage's run"""

    def __init__(
        self,
        stage: str,
        manifest: DatasetManifest,
        config: TrainConfig,
        init: Optional[StageCheckpoint] = None,
        fov_spec: Optional[FovClassSpec] = None,
        device: Optional[torch.device] = None,
    ):
        self.scale = stage_scale(stage)
        self.stage = stage_name(stage)
        self.manifest = manifest
        self.config = config
        self.device = device or get_device()
        self.start_step = 0
        self.fov_spec = fov_spec or (init.fov_spec() if init is not None else FovClassSpec.from_settings())

        seed_everything(config.seed)
        resume = init is not None and init.scale == self.scale
        if init is not None:
            _check_architecture(config, init)
            if SCALES.index(init.scale) > SCALES.index(self.scale):
                raise CheckpointError(f"Init checkpoint is stage '{init.stage}', above the requested '{self.stage}'")
            if init.data.get('large_height') != manifest.large_height:
                logger.warning(
                    "Init checkpoint was trained at large height %s, manifest has %d",
                    init.data.get('large_height'),
                    manifest.large_height,
                )
        elif self.scale != 's':
            raise CheckpointError(
                f"Stage '{self.stage}' needs --init with a checkpoint holding every lower stage"
            )

        if resume:
            self.generator = init.build_generator()
        elif init is not None:
            self.generator = unify(init, self.scale)
        else:
            self.generator = UnifiedGenerator.from_config(config, stage=self.scale)
        self.generator.to(self.device)
        self.generator.freeze_below(self.scale)

        height = scale_height(self.scale, manifest.large_height)
        try:
            check_patch_grid(height, 2 * height, config.disc_layers)
        except GeometryError as e:
            raise ConfigError(f"disc_layers = {config.disc_layers}: {e}") from e

        # discriminators are re-initialised each stage
        self.discriminator = PatchDiscriminator.from_config(config).to(self.device)
        if resume and self.scale in init.discriminators:
            self.discriminator.load_state_dict(init.discriminators[self.scale])

        self.fov_model = None
        if self.scale == 's' or (init is not None and init.fov is not None):
            self.fov_model = FovEstimator(self.fov_spec.n_classes, config.fov_channels)
            if init is not None and init.fov is not None:
                self.fov_model.load_state_dict(init.fov)
            self.fov_model.to(self.device)

        betas = (config.beta1, config.beta2)
        self.opt_g = torch.optim.Adam(self.generator.stage_parameters(self.scale), lr=config.lr, betas=betas)
        self.opt_d = torch.optim.Adam(self.discriminator.parameters(), lr=config.lr, betas=betas)
        self.opt_fov = None
        if self.scale == 's':
            self.opt_fov = torch.optim.Adam(self.fov_model.parameters(), lr=config.lr, betas=betas)

        if resume:
            self.start_step = init.step
            for name, optimizer in self._optimizers().items():
                if name in init.optimizers:
                    optimizer.load_state_dict(init.optimizers[name])

        # lower-scale discriminators are carried unchanged
        self.carried_discriminators = (
            {s: state for s, state in init.discriminators.items() if s != self.scale} if init is not None else {}
        )

    def _optimizers(self) -> Dict[str, torch.optim.Optimizer]:
        optimizers = {'g': self.opt_g, 'd': self.opt_d}
        if self.opt_fov is not None:
            optimizers['fov'] = self.opt_fov
        return optimizers

    def checkpoint(self, step: int) -> StageCheckpoint:
        discriminators = dict(self.carried_discriminators)
        discriminators[self.scale] = _cpu_state(self.discriminator)
        return StageCheckpoint(
            stage=self.stage,
            generator=_cpu_state(self.generator),
            config=self.config.echo(),
            data={
                'large_height': self.manifest.large_height,
                'view_size': self.manifest.view_size,
                'fov_law': self.manifest.fov_law,
                'fill_value': self.manifest.fill_value,
                'fov_bins': list(self.fov_spec.bin_centers),
            },
            step=step,
            discriminators=discriminators,
            fov=_cpu_state(self.fov_model) if self.fov_model is not None else None,
            optimizers={name: opt.state_dict() for name, opt in self._optimizers().items()},
        )

    def train_step(self, sample: dict) -> Dict[str, float]:
        device = self.device
        inputs = {s: sample['inputs'][s].unsqueeze(0).to(device) for s in self.generator.scales}
        target = sample['targets'][self.scale].unsqueeze(0).to(device)
        # condition is the constrained input built at this stage's own height, same as the generator sees
        condition = inputs[self.scale]

        fake = self.generator(inputs)[self.scale]

        real_patch = self.discriminator(condition, target)
        fake_patch = self.discriminator(condition, fake.detach())
        d_loss = discriminator_loss(real_patch, fake_patch)
        self.opt_d.zero_grad()
        d_loss.backward()
        self.opt_d.step()

        g_adv = generator_loss(self.discriminator(condition, fake))
        pix = pixel_loss(fake, target)
        total = total_loss(g_adv, pix, self.config.lambda_pix)
        self.opt_g.zero_grad()
        total.backward()
        self.opt_g.step()

        fov_ce = 0.0
        if self.opt_fov is not None:
            logits = self.fov_model(sample['views'].unsqueeze(0).to(device))
            ce = fov_loss(logits, sample['label'])
            self.opt_fov.zero_grad()
            ce.backward()
            self.opt_fov.step()
            fov_ce = ce.item()

        return {
            'd_loss': d_loss.item(),
            'g_adv': g_adv.item(),
            'pix': pix.item(),
            'fov_ce': fov_ce,
            'total': total.item(),
        }


def _read_loss_rows(path: Path, upto_step: int) -> List[dict]:
    if not path.exists() or upto_step <= 0:
        return []
    frame = pd.read_csv(path)
    return frame[frame['step'] <= upto_step].to_dict('records')


def write_loss_log(path: Path, rows: List[dict]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(rows, columns=LOSS_COLUMNS)
    frame['step'] = frame['step'].astype(int)
    frame.to_csv(path, index=False, float_format='%.8g')
    return path


def train_stage(
    stage: str,
    manifest: DatasetManifest,
    config: TrainConfig,
    init: Optional[StageCheckpoint] = None,
    out_dir=None,
    fov_spec: Optional[FovClassSpec] = None,
    device: Optional[torch.device] = None,
) -> StageCheckpoint:
    """
    Train one stage and persist its checkpoints and loss log under out_dir

    An init checkpoint of a lower stage is unified into this stage; one of
    the same stage resumes from its step counter with optimizer state.

    Raises:
        CheckpointError: medium/large without a lower-stage init
        DatasetError: empty training split
        TrainingAborted: a non-finite loss (diagnostic checkpoint written)
    """
    out_dir = Path(out_dir) if out_dir is not None else Path('runs')
    trainer = StageTrainer(stage, manifest, config, init=init, fov_spec=fov_spec, device=device)
    dataset = PanoramaPairs(manifest, 'train', scales=scales_through(trainer.scale), fov_spec=trainer.fov_spec)

    total_steps = config.steps_for(trainer.stage)
    log_path = loss_log_path(out_dir, trainer.stage)
    rows = _read_loss_rows(log_path, trainer.start_step)
    logger.info(
        "Training stage %s: steps %d..%d over %d records on %s",
        trainer.stage,
        trainer.start_step,
        total_steps,
        len(dataset),
        trainer.device,
    )

    for step in range(trainer.start_step, total_steps):
        sample = dataset[sample_order(len(dataset), step, config.seed)]
        losses = trainer.train_step(sample)
        done = step + 1

        if not all(math.isfinite(v) for v in losses.values()):
            path = trainer.checkpoint(done).save(out_dir / f'{trainer.stage}_diagnostic.pt')
            write_loss_log(log_path, rows + [{'step': done, **losses}])
            raise TrainingAborted(
                f"Non-finite loss at step {done} of stage {trainer.stage}: {losses}", diagnostic_path=path
            )

        rows.append({'step': done, **losses})
        if done % config.checkpoint_interval == 0:
            logger.info(
                "stage %s step %d: d=%.4f g_adv=%.4f pix=%.4f fov=%.4f",
                trainer.stage,
                done,
                losses['d_loss'],
                losses['g_adv'],
                losses['pix'],
                losses['fov_ce'],
            )
            if done < total_steps:
                trainer.checkpoint(done).save(out_dir / f'{trainer.stage}_step{done:06d}.pt')
                write_loss_log(log_path, rows)

    checkpoint = trainer.checkpoint(max(total_steps, trainer.start_step))
    checkpoint.save(out_dir / f'{trainer.stage}.pt')
    write_loss_log(log_path, rows)
    return checkpoint
