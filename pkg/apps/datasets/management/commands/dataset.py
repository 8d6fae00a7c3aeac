"""
Django management command to build or inspect a panorama dataset
Run with: python manage.py dataset build --src panos/ --out data/
"""
from collections import Counter

from django.conf import settings
from rich.table import Table

from apps.core.management.base import PipelineCommand
from apps.datasets.builder import build_dataset
from apps.datasets.manifest import read_manifest
from apps.geometry.views import FOV_SCALE_LAWS


class Command(PipelineCommand):
    help = 'Build a dataset from equirect panoramas, or summarise an existing manifest'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        build = actions.add_parser('build', help='Render views and scale pyramids for every source panorama')
        build.add_argument('--src', required=True, help='Directory of equirect PNG/JPEG images')
        build.add_argument('--out', required=True, help='Dataset directory (manifest.tsv is written here)')
        build.add_argument('--split', dest='split_ratio', type=float, default=0.8, help='Fraction of records in train')
        build.add_argument('--fov-min', type=float, default=45.0)
        build.add_argument('--fov-max', type=float, default=75.0)
        build.add_argument('--large-height', type=int, default=None, help='Default: PANO360_LARGE_HEIGHT')
        build.add_argument('--view-size', type=int, default=None, help='Default: PANO360_VIEW_SIZE')
        build.add_argument('--fill', default=None, help="'gray', 'black' or a value in [-1, 1]")
        build.add_argument('--law', choices=FOV_SCALE_LAWS, default=None)
        build.add_argument('--workers', type=int, default=None)
        self.add_seed_argument(build)

        show = actions.add_parser('show', help='Print a summary of a manifest')
        show.add_argument('--manifest', required=True, help='manifest.tsv or its dataset directory')

    def handle(self, *args, **kwargs):
        if kwargs['action'] == 'build':
            manifest = build_dataset(
                kwargs['src'],
                kwargs['out'],
                split_ratio=kwargs['split_ratio'],
                fov_range=(kwargs['fov_min'], kwargs['fov_max']),
                seed=kwargs['seed'],
                large_height=kwargs['large_height'],
                view_size=kwargs['view_size'],
                fov_law=kwargs['law'],
                fill=kwargs['fill'],
                workers=kwargs['workers'],
            )
            self.stdout.write(self.style.SUCCESS(f"✅ Dataset built in {manifest.root}"))
        else:
            manifest = read_manifest(kwargs['manifest'])
        self.show_manifest(manifest)

    def show_manifest(self, manifest):
        table = Table(show_header=True, header_style='bold magenta', title=str(manifest.root))
        table.add_column('Split', style='cyan')
        table.add_column('Records', style='green')
        table.add_column('fov (deg): count', style='yellow')
        for split in ('train', 'test'):
            records = manifest.split(split)
            fovs = Counter(r.fov_deg for r in records)
            table.add_row(split, str(len(records)), ', '.join(f'{f:g}: {n}' for f, n in sorted(fovs.items())))
        self.print_table(table)

        self.stdout.write(
            f"large height {manifest.large_height}, view size {manifest.view_size}, "
            f"fov law {manifest.fov_law}, fill {manifest.fill_value:g}, seed {manifest.seed}"
        )
        for entry in manifest.skipped:
            self.stdout.write(self.style.WARNING(f"skipped {entry}"))
        if settings.PANO360_CACHE:
            self.stdout.write(f"constrained-input cache: {settings.PANO360_CACHE}")
