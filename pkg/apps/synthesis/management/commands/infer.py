"""
Django management command to synthesize a panorama from four views
Run with: python manage.py infer --views n.png w.png s.png e.png --ckpt large.pt --out pano.png
"""
from apps.core.imaging import write_image
from apps.core.management.base import PipelineCommand
from apps.datasets.samples import read_views
from apps.synthesis.config import STAGES
from apps.synthesis.inference import Synthesizer


class Command(PipelineCommand):
    help = 'Synthesize an equirect panorama from four compass views'

    def add_arguments(self, parser):
        parser.add_argument(
            '--views',
            nargs=4,
            required=True,
            metavar=('NORTH', 'WEST', 'SOUTH', 'EAST'),
            help='Four views in north, west, south, east order; non-square photos are center-cropped',
        )
        parser.add_argument('--ckpt', required=True)
        parser.add_argument('--out', required=True, help='Output PNG')
        parser.add_argument('--fov', type=float, default=None, help='Known fov in degrees; skips the classifier')
        parser.add_argument('--stage', choices=STAGES, default=None, help="Default: the checkpoint's stage")

    def handle(self, *args, **kwargs):
        views = read_views(kwargs['views'])
        synthesizer = Synthesizer(kwargs['ckpt'], kwargs['stage'])
        pano, fov = synthesizer(views, kwargs['fov'])
        path = write_image(kwargs['out'], pano.pixels)

        source = 'given' if kwargs['fov'] is not None else 'predicted'
        self.stdout.write(f"fov: {fov:g} degrees ({source})")
        self.stdout.write(self.style.SUCCESS(f"✅ Wrote {pano.height}x{pano.width} panorama to {path}"))
