import io
import math

import numpy as np
import pandas as pd
import pytest

from apps.core.cli import run
from apps.core.exceptions import DatasetError
from apps.core.imaging import read_image
from apps.datasets.samples import PYRAMID_FILES
from apps.metrics.reports import HISTOGRAM_BINS, evaluate, histogram
from apps.synthesis.training import train_stage


def _ground_truth(manifest, scale='l'):
    def predict(views, record):
        return read_image(manifest.record_dir(record) / PYRAMID_FILES[scale])

    return predict


def test_histogram_keeps_every_value():
    edges, counts = histogram([0.5, 2.0, -1.0, math.inf], 0.0, 1.0)
    assert len(edges) == HISTOGRAM_BINS + 1
    assert counts.sum() == 4
    assert counts[0] == 1
    assert counts[-1] == 2


def test_ground_truth_scores_perfectly(tiny_dataset, tmp_path):
    out = tmp_path / 'eval' / 'report.csv'
    report = evaluate(None, tiny_dataset, 'test', out, stage='medium', predictor=_ground_truth(tiny_dataset, 'm'))

    assert len(report.records) == 2
    assert report.mean_ssim == pytest.approx(1.0)
    assert report.mean_psnr == math.inf

    header = [line for line in out.read_text(encoding='utf-8').splitlines() if line.startswith('#')]
    assert '# psnr_identical=inf' in header
    assert '# records=2' in header
    frame = pd.read_csv(out, comment='#')
    assert list(frame.columns) == ['id', 'ssim', 'psnr_db']
    assert sorted(frame['id']) == sorted(r.id for r in tiny_dataset.split('test'))

    ssim_hist = pd.read_csv(out.parent / 'ssim_hist.csv')
    psnr_hist = pd.read_csv(out.parent / 'psnr_hist.csv')
    assert len(ssim_hist) == HISTOGRAM_BINS
    assert ssim_hist['count'].sum() == 2
    assert psnr_hist['count'].iloc[-1] == 2


def test_shifted_prediction_scores_lower(tiny_dataset):
    truth = _ground_truth(tiny_dataset, 'l')

    def shifted(views, record):
        return np.roll(truth(views, record), 8, axis=1)

    report = evaluate(None, tiny_dataset, 'train', stage='large', predictor=shifted)
    assert report.mean_ssim < 1.0
    assert np.isfinite(report.records['psnr_db']).all()


def test_plots_are_written(tiny_dataset, tmp_path):
    out = tmp_path / 'report.csv'
    evaluate(None, tiny_dataset, 'test', out, stage='large', predictor=_ground_truth(tiny_dataset, 'l'), plots=True)
    assert (tmp_path / 'ssim_hist.png').stat().st_size > 0
    assert (tmp_path / 'psnr_hist.png').stat().st_size > 0


def test_empty_split(tiny_dataset):
    with pytest.raises(DatasetError):
        evaluate(None, tiny_dataset, 'validation', predictor=_ground_truth(tiny_dataset))


def test_missing_ground_truth(tiny_dataset):
    record = tiny_dataset.split('test')[0]
    (tiny_dataset.record_dir(record) / PYRAMID_FILES['m']).unlink()
    with pytest.raises(DatasetError):
        evaluate(None, tiny_dataset, 'test', stage='medium', predictor=_ground_truth(tiny_dataset, 'm'))


def test_eval_command(tiny_dataset, tiny_config, tmp_path):
    small = train_stage('small', tiny_dataset, tiny_config, out_dir=tmp_path / 'runs')
    train_stage('medium', tiny_dataset, tiny_config, init=small, out_dir=tmp_path / 'runs')
    out = tmp_path / 'eval' / 'report.csv'
    stdout, stderr = io.StringIO(), io.StringIO()

    code = run(
        ['eval', '--ckpt', str(tmp_path / 'runs' / 'medium.pt'), '--manifest', str(tiny_dataset.root),
         '--out', str(out), '--stage', 'medium'],
        stdout=stdout,
        stderr=stderr,
    )
    assert code == 0, stderr.getvalue()
    assert 'Mean SSIM' in stdout.getvalue()
    assert len(pd.read_csv(out, comment='#')) == 2
