import io
import math

import numpy as np
import pandas as pd
import pytest
import torch

from apps.core.cli import run
from apps.core.exceptions import CheckpointError, ConfigError, TrainingAborted
from apps.core.imaging import read_image
from apps.datasets.builder import build_dataset
from apps.datasets.normalization import normalize
from apps.datasets.samples import PYRAMID_FILES, generate_sample
from apps.geometry.types import EquirectPanorama
from apps.metrics.quality import psnr
from apps.metrics.reports import evaluate
from apps.synthesis.checkpoints import StageCheckpoint
from apps.synthesis.config import TrainConfig
from apps.synthesis.generator import group_checksums
from apps.synthesis.inference import infer
from apps.synthesis.training import LOSS_COLUMNS, sample_order, train_stage


def test_sample_order_visits_every_record_each_pass():
    first = [sample_order(5, step, seed=0) for step in range(5)]
    second = [sample_order(5, step, seed=0) for step in range(5, 10)]
    assert sorted(first) == list(range(5))
    assert sorted(second) == list(range(5))
    assert first == [sample_order(5, step, seed=0) for step in range(5)]


def test_small_stage_outputs(tiny_dataset, tiny_config, tmp_path):
    ckpt = train_stage('small', tiny_dataset, tiny_config, out_dir=tmp_path)

    assert ckpt.step == 4
    assert set(ckpt.groups) == {'in_bridge_s', 'core_s', 'out_bridge_s'}
    assert ckpt.fov is not None
    assert set(ckpt.optimizers) == {'g', 'd', 'fov'}
    assert (tmp_path / 'small.pt').is_file()
    assert (tmp_path / 'small_step000002.pt').is_file()

    log = pd.read_csv(tmp_path / 'small_losses.csv')
    assert list(log.columns) == LOSS_COLUMNS
    assert log['step'].tolist() == [1, 2, 3, 4]
    assert np.isfinite(log[LOSS_COLUMNS[1:]].to_numpy()).all()
    assert (log['fov_ce'] > 0).all()


def test_resume_matches_uninterrupted_run(tiny_dataset, tiny_config, tmp_path):
    full = train_stage('small', tiny_dataset, tiny_config, out_dir=tmp_path)
    first_rows = pd.read_csv(tmp_path / 'small_losses.csv')

    halfway = StageCheckpoint.load(tmp_path / 'small_step000002.pt')
    assert halfway.step == 2
    resumed = train_stage('small', tiny_dataset, tiny_config, init=halfway, out_dir=tmp_path)

    assert resumed.step == 4
    for key, tensor in full.generator.items():
        assert torch.allclose(resumed.generator[key], tensor, atol=1e-6), key
    rows = pd.read_csv(tmp_path / 'small_losses.csv')
    assert rows['step'].tolist() == [1, 2, 3, 4]
    pd.testing.assert_frame_equal(rows.iloc[:2], first_rows.iloc[:2])


def test_medium_needs_a_lower_stage(tiny_dataset, tiny_config, tmp_path):
    with pytest.raises(CheckpointError):
        train_stage('medium', tiny_dataset, tiny_config, out_dir=tmp_path)


def test_progressive_stages_keep_lower_groups(tiny_dataset, tiny_config, tmp_path):
    small = train_stage('small', tiny_dataset, tiny_config, out_dir=tmp_path)
    medium = train_stage('medium', tiny_dataset, tiny_config, init=small, out_dir=tmp_path)
    large = train_stage('large', tiny_dataset, tiny_config, init=medium, out_dir=tmp_path)

    small_groups = group_checksums(small.build_generator())
    medium_groups = group_checksums(medium.build_generator())
    large_groups = group_checksums(large.build_generator())
    for name, digest in small_groups.items():
        assert medium_groups[name] == digest
        assert large_groups[name] == digest
    for name in ('in_bridge_m', 'core_m', 'out_bridge_m'):
        assert large_groups[name] == medium_groups[name]

    assert len(large.groups) == 9
    assert set(large.discriminators) == {'s', 'm', 'l'}
    assert large.fov is not None
    log = pd.read_csv(tmp_path / 'medium_losses.csv')
    assert (log['fov_ce'] == 0).all()


def test_network_sizing_must_match_init(tiny_dataset, tiny_config, tmp_path):
    small = train_stage('small', tiny_dataset, tiny_config, out_dir=tmp_path)
    wider = tiny_config.model_copy(update={'base_channels': 16})
    with pytest.raises(ConfigError, match='base_channels'):
        train_stage('medium', tiny_dataset, wider, init=small, out_dir=tmp_path)


def test_non_finite_loss_aborts_with_diagnostic(tiny_dataset, tiny_config, tmp_path, monkeypatch):
    monkeypatch.setattr(
        'apps.synthesis.training.pixel_loss', lambda pred, gt: (pred - gt).abs().mean() * math.nan
    )
    with pytest.raises(TrainingAborted) as excinfo:
        train_stage('small', tiny_dataset, tiny_config, out_dir=tmp_path)

    assert excinfo.value.diagnostic_path == tmp_path / 'small_diagnostic.pt'
    assert StageCheckpoint.load(excinfo.value.diagnostic_path).step == 1
    assert pd.read_csv(tmp_path / 'small_losses.csv')['step'].tolist() == [1]


def _train_cli(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    return run(['train', *argv], stdout=stdout, stderr=stderr), stdout.getvalue(), stderr.getvalue()


def _write_config(path, config):
    path.write_text('\n'.join(f'{key} = {value}' for key, value in config.echo().items()) + '\n', encoding='utf-8')
    return path


def test_train_command(tiny_dataset, tiny_config, tmp_path):
    config = _write_config(tmp_path / 'train.cfg', tiny_config)
    out = tmp_path / 'runs'

    code, stdout, stderr = _train_cli(
        '--stage', 'small', '--manifest', str(tiny_dataset.root), '--config', str(config), '--out', str(out)
    )
    assert code == 0, stderr
    assert 'Stage small done at step 4' in stdout

    code, _, _ = _train_cli(
        '--stage', 'medium', '--manifest', str(tiny_dataset.root), '--config', str(config),
        '--init', str(out / 'small.pt'), '--out', str(out), '--seed', '3',
    )
    assert code == 0
    assert StageCheckpoint.load(out / 'medium.pt').train_config().seed == 3


def test_train_command_exit_codes(tiny_dataset, tiny_config, tmp_path, monkeypatch):
    config = _write_config(tmp_path / 'train.cfg', tiny_config)
    manifest = str(tiny_dataset.root)

    code, _, stderr = _train_cli('--stage', 'medium', '--manifest', manifest, '--out', str(tmp_path))
    assert code == 2
    assert '--init' in stderr

    (tmp_path / 'bad.cfg').write_text('lr = fast\n', encoding='utf-8')
    code, _, _ = _train_cli('--stage', 'small', '--manifest', manifest, '--config', str(tmp_path / 'bad.cfg'))
    assert code == 1

    code, _, _ = _train_cli('--stage', 'huge', '--manifest', manifest)
    assert code == 1

    monkeypatch.setattr('apps.synthesis.training.pixel_loss', lambda pred, gt: pred.sum() * math.inf)
    code, _, _ = _train_cli('--stage', 'small', '--manifest', manifest, '--config', str(config), '--out', str(tmp_path))
    assert code == 3




def test_identical_runs_write_identical_logs(tiny_dataset, tiny_config, tmp_path):
    train_stage('small', tiny_dataset, tiny_config, out_dir=tmp_path / 'a')
    train_stage('small', tiny_dataset, tiny_config, out_dir=tmp_path / 'b')
    assert (tmp_path / 'a' / 'small_losses.csv').read_bytes() == (tmp_path / 'b' / 'small_losses.csv').read_bytes()


def test_resumed_stage_keeps_lower_discriminators(tiny_dataset, tiny_config, tmp_path):
    config = tiny_config.model_copy(update={'steps_medium': 4})
    small = train_stage('small', tiny_dataset, config, out_dir=tmp_path)
    full = train_stage('medium', tiny_dataset, config, init=small, out_dir=tmp_path)
    assert set(full.discriminators) == {'s', 'm'}

    halfway = StageCheckpoint.load(tmp_path / 'medium_step000002.pt')
    assert set(halfway.discriminators) == {'s', 'm'}
    resumed = train_stage('medium', tiny_dataset, config, init=halfway, out_dir=tmp_path)

    assert set(resumed.discriminators) == {'s', 'm'}
    assert set(StageCheckpoint.load(tmp_path / 'medium.pt').discriminators) == {'s', 'm'}
    for key, tensor in small.discriminators['s'].items():
        assert torch.equal(resumed.discriminators['s'][key], tensor), key


def test_discriminator_too_deep_for_the_small_scale(tiny_dataset, tiny_config, tmp_path):
    deep = tiny_config.model_copy(update={'disc_layers': 4})
    with pytest.raises(ConfigError, match='disc_layers'):
        train_stage('small', tiny_dataset, deep, out_dir=tmp_path)

    config = _write_config(tmp_path / 'deep.cfg', deep)
    code, _, stderr = _train_cli(
        '--stage', 'small', '--manifest', str(tiny_dataset.root), '--config', str(config), '--out', str(tmp_path)
    )
    assert code == 1
    assert 'too small' in stderr


def _band_psnr(pred: np.ndarray, gt: np.ndarray, band_deg: float = 45.0) -> float:
    height = gt.shape[0]
    elevation = 90.0 - (np.arange(height) + 0.5) * 180.0 / height
    rows = np.abs(elevation) <= band_deg
    return psnr(pred[rows], gt[rows])


@pytest.mark.slow
def test_small_stage_overfits_four_panoramas(source_factory, tmp_path):
    source_factory(tmp_path / 'src', 4, height=128)
    manifest = build_dataset(tmp_path / 'src', tmp_path / 'data', split_ratio=1.0, large_height=512, view_size=256)
    ckpt = train_stage('small', manifest, TrainConfig(), out_dir=tmp_path / 'runs')

    log = pd.read_csv(tmp_path / 'runs' / 'small_losses.csv')
    assert len(log) == 2000
    assert log['pix'].tail(50).mean() < 0.08
    assert evaluate(ckpt, manifest, 'train', stage='small').mean_ssim > 0.8

    # more of the sphere in the views gives a closer panorama on the side-face band
    record = manifest.split('train')[0]
    directory = manifest.record_dir(record)
    pano = EquirectPanorama(normalize(read_image(directory / PYRAMID_FILES['l'])))
    gt = read_image(directory / PYRAMID_FILES['s'])
    scores = {}
    for fov in (45.0, 90.0):
        sample = generate_sample(pano, fov, view_size=256, large_height=512, fov_range=(fov, fov))
        scores[fov] = _band_psnr(infer(sample.views, ckpt, fov_deg=fov).pixels, gt)
    assert scores[90.0] > scores[45.0]
