"""
Django management command comparing cube-map and equirect output formats
Run with: python manage.py demo-seams --pano pano.png --fov 60 --out seams/
"""
from pathlib import Path

from apps.core.imaging import read_image, write_image
from apps.core.management.base import PipelineCommand
from apps.datasets.normalization import denormalize, normalize, resolve_fill
from apps.geometry.types import EquirectPanorama
from apps.synthesis.seams import run_seam_demo


class Command(PipelineCommand):
    help = 'Fit tiny cube-map and equirect models on one panorama and score their face seams'

    def add_arguments(self, parser):
        parser.add_argument('--pano', required=True, help='Equirect panorama (W = 2H)')
        parser.add_argument('--fov', type=float, default=60.0)
        parser.add_argument('--steps', type=int, default=300)
        parser.add_argument('--out', required=True, help='Directory for cubemap_warped.png and equirect.png')
        parser.add_argument('--height', type=int, default=64, help='Working panorama height (multiple of 8)')
        parser.add_argument('--fill', default='gray')
        self.add_seed_argument(parser)

    def handle(self, *args, **kwargs):
        pano = EquirectPanorama(normalize(read_image(kwargs['pano'])))
        demo = run_seam_demo(
            pano,
            kwargs['fov'],
            steps=kwargs['steps'],
            seed=kwargs['seed'],
            height=kwargs['height'],
            view_size=kwargs['height'],
            fill=resolve_fill(kwargs['fill']),
        )
        out_dir = Path(kwargs['out'])
        write_image(out_dir / 'cubemap_warped.png', denormalize(demo.cubemap_warped.pixels))
        write_image(out_dir / 'equirect.png', denormalize(demo.equirect.pixels))

        self.stdout.write(f"seam score, cube-map format: {demo.cubemap_score:.4f}")
        self.stdout.write(f"seam score, equirect format: {demo.equirect_score:.4f}")
        self.stdout.write(self.style.SUCCESS(f"✅ Wrote cubemap_warped.png and equirect.png to {out_dir}"))
