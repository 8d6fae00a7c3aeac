import io

import pytest
import torch

from apps.core.cli import run
from apps.core.exceptions import DatasetError
from apps.datasets.loader import PanoramaPairs
from apps.fov.classes import FovClassSpec


def test_item_layout(tiny_dataset):
    pairs = PanoramaPairs(tiny_dataset, 'train')
    assert len(pairs) == 2

    item = pairs[0]
    record = tiny_dataset.split('train')[0]
    assert item['id'] == record.id
    assert item['fov'] == record.fov_deg
    assert item['label'] == FovClassSpec().class_of(record.fov_deg)
    assert item['views'].shape == (4, 3, 16, 16)
    assert item['inputs']['s'].shape == (3, 8, 16)
    assert item['inputs']['m'].shape == (3, 16, 32)
    assert item['inputs']['l'].shape == (3, 32, 64)
    assert item['targets']['l'].shape == (3, 32, 64)
    assert item['inputs']['l'].dtype == torch.float32


def test_scales_subset(tiny_dataset):
    item = PanoramaPairs(tiny_dataset, 'test', scales=('s',))[1]
    assert set(item['inputs']) == {'s'}
    assert set(item['targets']) == {'s'}


def test_disk_cache_is_reused(tiny_dataset, tmp_path):
    cache = tmp_path / 'cache'
    first = PanoramaPairs(tiny_dataset, 'train', cache_dir=cache)[0]['inputs']['m']
    files = sorted((cache / 'constrained').glob('*.npy'))
    assert len(files) == 3

    second = PanoramaPairs(tiny_dataset, 'train', cache_dir=cache)[0]['inputs']['m']
    assert torch.equal(first, second)


def test_empty_split(tiny_dataset):
    with pytest.raises(DatasetError):
        PanoramaPairs(tiny_dataset, 'validation')


def test_dataset_command_build_and_show(source_dir, tmp_path):
    out = tmp_path / 'built'
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(
        ['dataset', 'build', '--src', str(source_dir), '--out', str(out), '--split', '0.5',
         '--large-height', '16', '--view-size', '8', '--seed', '1'],
        stdout=stdout,
        stderr=stderr,
    )
    assert code == 0, stderr.getvalue()
    assert 'Dataset built' in stdout.getvalue()

    stdout = io.StringIO()
    assert run(['dataset', 'show', '--manifest', str(out)], stdout=stdout, stderr=stderr) == 0
    assert 'train' in stdout.getvalue()
    assert 'large height 16' in stdout.getvalue()


def test_dataset_command_missing_source(tmp_path):
    stderr = io.StringIO()
    code = run(
        ['dataset', 'build', '--src', str(tmp_path / 'none'), '--out', str(tmp_path / 'out')],
        stdout=io.StringIO(),
        stderr=stderr,
    )
    assert code == 2
    assert 'not found' in stderr.getvalue()


def test_memory_cache_is_bounded(tiny_dataset):
    pairs = PanoramaPairs(tiny_dataset, 'train', memory_items=2)
    first = pairs[0]['inputs']['s']
    pairs[1]
    assert len(pairs._memory) == 2
    assert list(pairs._memory) == [(pairs.records[1].id, 'm'), (pairs.records[1].id, 'l')]
    assert torch.equal(pairs[0]['inputs']['s'], first)

    uncached = PanoramaPairs(tiny_dataset, 'train', memory_items=0)
    uncached[0]
    assert not uncached._memory
