import io

import numpy as np

from apps.core.cli import run
from apps.core.imaging import read_image, write_image
from apps.datasets.normalization import denormalize
from apps.geometry.types import FACE_KEYS


def _run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    return run(list(argv), stdout=stdout, stderr=stderr), stdout.getvalue(), stderr.getvalue()


def test_e2c_then_c2e(pano_factory, tmp_path):
    source = write_image(tmp_path / 'pano.png', denormalize(pano_factory(32).pixels))

    code, out, _ = _run('geom', 'e2c', str(source), str(tmp_path / 'faces'), '--face-size', '16')
    assert code == 0
    for key in FACE_KEYS:
        assert read_image(tmp_path / 'faces' / f'face_{key}.png').shape == (16, 16, 3)
    assert 'Wrote 6 file(s)' in out

    code, _, _ = _run('geom', 'c2e', str(tmp_path / 'faces'), str(tmp_path / 'back.png'), '--height', '32')
    assert code == 0
    assert read_image(tmp_path / 'back.png').shape == (32, 64, 3)


def test_view_and_embed(pano_factory, tmp_path):
    source = write_image(tmp_path / 'pano.png', denormalize(pano_factory(32).pixels))
    view = tmp_path / 'view.png'

    code, _, _ = _run('geom', 'view', str(source), str(view), '--yaw', '90', '--fov', '60', '--size', '24')
    assert code == 0
    assert read_image(view).shape == (24, 24, 3)

    embedded = tmp_path / 'embedded.png'
    code, _, _ = _run('geom', 'embed', str(view), str(embedded), '--fov', '45', '--face-size', '32', '--fill', 'black')
    assert code == 0
    face = read_image(embedded)
    assert face.shape == (32, 32, 3)
    assert np.all(face[0, 0] == 0)


def test_out_of_range_fov_is_a_data_error(pano_factory, tmp_path):
    source = write_image(tmp_path / 'pano.png', denormalize(pano_factory(16).pixels))
    code, _, err = _run('geom', 'view', str(source), str(tmp_path / 'v.png'), '--fov', '150')
    assert code == 2
    assert 'fov' in err


def test_non_panorama_input_is_a_data_error(tmp_path):
    source = write_image(tmp_path / 'square.png', np.zeros((16, 16, 3), dtype=np.uint8))
    code, _, _ = _run('geom', 'e2c', str(source), str(tmp_path / 'faces'), '--face-size', '8')
    assert code == 2


def test_missing_required_flag_is_a_usage_error(tmp_path):
    code, _, _ = _run('geom', 'e2c', str(tmp_path / 'p.png'), str(tmp_path / 'faces'))
    assert code == 1
