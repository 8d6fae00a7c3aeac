"""
Django management command to classify the shared field of view of four views
Run with: python manage.py fov predict --views n.png w.png s.png e.png --ckpt small.pt
"""
import json

from rich.table import Table

from apps.core.management.base import PipelineCommand
from apps.datasets.samples import read_views
from apps.fov.network import fov_forward
from apps.synthesis.checkpoints import StageCheckpoint


class Command(PipelineCommand):
    help = 'Predict the relative field of view of four compass views'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)
        predict = actions.add_parser('predict', help='Classify one view set')
        predict.add_argument(
            '--views',
            nargs=4,
            required=True,
            metavar=('NORTH', 'WEST', 'SOUTH', 'EAST'),
            help='Four views in north, west, south, east order; non-square photos are center-cropped',
        )
        predict.add_argument('--ckpt', required=True, help='Checkpoint carrying the fov classifier')
        predict.add_argument('--json', action='store_true', help='Print the prediction as JSON')

    def handle(self, *args, **kwargs):
        views = read_views(kwargs['views'])
        ckpt = StageCheckpoint.load(kwargs['ckpt'])
        spec = ckpt.fov_spec()
        prediction = fov_forward(views, ckpt.build_fov(), spec)

        if kwargs['json']:
            self.stdout.write(json.dumps(prediction.as_dict()))
            return

        table = Table(show_header=True, header_style='bold magenta', title='fov logits')
        table.add_column('Class', style='cyan')
        table.add_column('Center (deg)', style='green')
        table.add_column('Logit', style='yellow')
        for index, (center, logit) in enumerate(zip(spec.bin_centers, prediction.logits)):
            marker = ' ←' if index == prediction.predicted_class else ''
            table.add_row(str(index), f'{center:g}{marker}', f'{logit:.4f}')
        self.print_table(table)
        self.stdout.write(self.style.SUCCESS(f'🎯 Predicted fov: {prediction.predicted_fov:g} degrees'))
