"""
Django management command to train one stage of the synthesis network
Run with: python manage.py train --stage small --manifest data/ --config train.cfg
"""
from pathlib import Path

from django.conf import settings

from apps.core.management.base import PipelineCommand
from apps.datasets.manifest import read_manifest
from apps.synthesis.checkpoints import StageCheckpoint
from apps.synthesis.config import STAGES, load_train_config
from apps.synthesis.training import loss_log_path, train_stage


class Command(PipelineCommand):
    help = 'Train the small, medium or large stage; medium and large unify an --init checkpoint'

    def add_arguments(self, parser):
        parser.add_argument('--stage', choices=STAGES, required=True)
        parser.add_argument('--manifest', required=True, help='manifest.tsv or its dataset directory')
        parser.add_argument('--config', default=None, help='key = value training config (defaults when omitted)')
        parser.add_argument(
            '--init',
            default=None,
            help='Lower-stage checkpoint to unify, or a same-stage checkpoint to resume',
        )
        parser.add_argument('--out', default=None, help='Run directory (default: PANO360_RUNS_DIR)')
        parser.add_argument('--seed', type=int, default=None, help='Overrides the config seed')

    def handle(self, *args, **kwargs):
        config = load_train_config(kwargs['config'])
        if kwargs['seed'] is not None:
            config = config.model_copy(update={'seed': kwargs['seed']})
        manifest = read_manifest(kwargs['manifest'])
        init = StageCheckpoint.load(kwargs['init']) if kwargs['init'] else None
        out_dir = Path(kwargs['out']) if kwargs['out'] else Path(settings.PANO360_RUNS_DIR)

        self.stdout.write(f"🚀 Training stage {kwargs['stage']} ({config.steps_for(kwargs['stage'])} steps)...")
        checkpoint = train_stage(kwargs['stage'], manifest, config, init=init, out_dir=out_dir)

        self.stdout.write(self.style.SUCCESS(f"✅ Stage {checkpoint.stage} done at step {checkpoint.step}"))
        self.stdout.write(f"checkpoint: {out_dir / (checkpoint.stage + '.pt')}")
        self.stdout.write(f"loss log:   {loss_log_path(out_dir, checkpoint.stage)}")
