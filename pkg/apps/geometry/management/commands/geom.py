"""
Django management command for the spherical geometry conversions
Run with: python manage.py geom {e2c,c2e,view,embed} ...
"""
from pathlib import Path

from rich.table import Table

from apps.core.imaging import read_image, write_image
from apps.core.management.base import PipelineCommand
from apps.datasets.normalization import denormalize, normalize, resolve_fill
from apps.geometry.cubemap import cubemap_to_equirect, equirect_to_cubemap
from apps.geometry.types import FACE_KEYS, CubeMapFaces, EquirectPanorama
from apps.geometry.views import FOV_SCALE_LAWS, embed_view_with_fov, render_view

FACE_FILE = 'face_{}.png'


class Command(PipelineCommand):
    help = 'Equirect <-> cube map conversion, perspective views and fov embedding'

    def add_arguments(self, parser):
        actions = parser.add_subparsers(dest='action', required=True)

        e2c = actions.add_parser('e2c', help='Equirect panorama to six cube face PNGs')
        e2c.add_argument('input', help='Equirect image (W = 2H)')
        e2c.add_argument('output_dir', help='Directory for face_<key>.png files')
        e2c.add_argument('--face-size', type=int, required=True)

        c2e = actions.add_parser('c2e', help='Six cube face PNGs to an equirect panorama')
        c2e.add_argument('input_dir', help='Directory holding face_<key>.png files')
        c2e.add_argument('output')
        c2e.add_argument('--height', type=int, required=True, help='Panorama height; width is twice that')

        view = actions.add_parser('view', help='Render one perspective view')
        view.add_argument('input')
        view.add_argument('output')
        view.add_argument('--yaw', type=float, default=0.0, help='Degrees, growing toward west')
        view.add_argument('--pitch', type=float, default=0.0)
        view.add_argument('--fov', type=float, default=90.0)
        view.add_argument('--size', type=int, default=256)

        embed = actions.add_parser('embed', help='Place a view at its relative fov inside a cube face')
        embed.add_argument('input')
        embed.add_argument('output')
        embed.add_argument('--fov', type=float, required=True)
        embed.add_argument('--face-size', type=int, required=True)
        embed.add_argument('--fill', default='gray', help="'gray', 'black' or a value in [-1, 1]")
        embed.add_argument('--law', choices=FOV_SCALE_LAWS, default='tangent')

    def handle(self, *args, **kwargs):
        action = kwargs['action']
        written = getattr(self, f'handle_{action}')(kwargs)

        table = Table(show_header=True, header_style='bold magenta', title=f'geom {action}')
        table.add_column('File', style='cyan')
        table.add_column('Size', style='green')
        for path, pixels in written:
            table.add_row(str(path), f'{pixels.shape[1]}x{pixels.shape[0]}')
        self.print_table(table)
        self.stdout.write(self.style.SUCCESS(f'✅ Wrote {len(written)} file(s)'))

    def handle_e2c(self, kwargs):
        pano = EquirectPanorama(normalize(read_image(kwargs['input'])))
        faces = equirect_to_cubemap(pano, kwargs['face_size'])
        out_dir = Path(kwargs['output_dir'])
        written = []
        for key in FACE_KEYS:
            pixels = denormalize(faces.faces[key])
            written.append((write_image(out_dir / FACE_FILE.format(key), pixels), pixels))
        return written

    def handle_c2e(self, kwargs):
        in_dir = Path(kwargs['input_dir'])
        faces = CubeMapFaces({key: normalize(read_image(in_dir / FACE_FILE.format(key))) for key in FACE_KEYS})
        pixels = denormalize(cubemap_to_equirect(faces, kwargs['height']).pixels)
        return [(write_image(kwargs['output'], pixels), pixels)]

    def handle_view(self, kwargs):
        pano = EquirectPanorama(normalize(read_image(kwargs['input'])))
        pixels = denormalize(render_view(pano, kwargs['yaw'], kwargs['pitch'], kwargs['fov'], kwargs['size']))
        return [(write_image(kwargs['output'], pixels), pixels)]

    def handle_embed(self, kwargs):
        view = normalize(read_image(kwargs['input']))
        face = embed_view_with_fov(
            view, kwargs['fov'], kwargs['face_size'], resolve_fill(kwargs['fill']), kwargs['law']
        )
        pixels = denormalize(face)
        return [(write_image(kwargs['output'], pixels), pixels)]
