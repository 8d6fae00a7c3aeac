import io
import math

import numpy as np
import pytest

from apps.core.cli import run
from apps.core.imaging import read_image, write_image
from apps.datasets.normalization import denormalize
from apps.geometry.cubemap import cubemap_to_equirect
from apps.geometry.types import CubeMapFaces
from apps.synthesis.seams import run_seam_demo, seam_score


def test_smooth_panorama_has_no_seam(pano_factory):
    assert seam_score(pano_factory(64)) < 3.0


def test_solid_faces_score_a_strong_seam():
    colors = (-0.8, -0.4, 0.0, 0.4, 0.8, 0.6)
    pano = cubemap_to_equirect(CubeMapFaces.from_sequence([np.full((8, 8, 3), c) for c in colors]), 32)
    assert seam_score(pano) > 10.0


def test_demo_outputs(pano_factory):
    demo = run_seam_demo(pano_factory(32), 60.0, steps=3, height=16, view_size=16)
    assert demo.cubemap_warped.pixels.shape == (16, 32, 3)
    assert demo.equirect.pixels.shape == (16, 32, 3)
    assert math.isfinite(demo.cubemap_score)
    assert math.isfinite(demo.equirect_score)


def test_demo_command(pano_factory, tmp_path):
    source = write_image(tmp_path / 'pano.png', denormalize(pano_factory(32).pixels))
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(
        ['demo-seams', '--pano', str(source), '--fov', '60', '--steps', '2', '--height', '16', '--out', str(tmp_path / 'seams')],
        stdout=stdout,
        stderr=stderr,
    )
    assert code == 0, stderr.getvalue()
    assert read_image(tmp_path / 'seams' / 'cubemap_warped.png').shape == (16, 32, 3)
    assert read_image(tmp_path / 'seams' / 'equirect.png').shape == (16, 32, 3)
    assert 'seam score, equirect format' in stdout.getvalue()


@pytest.mark.slow
def test_cube_format_leaves_visible_seams(pano_factory):
    demo = run_seam_demo(pano_factory(64), 60.0, steps=300)
    assert demo.cubemap_score > demo.equirect_score
