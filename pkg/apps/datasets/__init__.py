"""
Training/evaluation samples, scale pyramids and the dataset manifest
"""
from .builder import build_dataset
from .manifest import DatasetManifest, ManifestRecord, read_manifest, write_manifest
from .normalization import denormalize, normalize, resolve_fill
from .pyramid import SCALES, SCALE_NAMES, ScalePyramid, make_pyramid
from .samples import SampleRecord, generate_sample

__all__ = [
    'SCALES',
    'SCALE_NAMES',
    'DatasetManifest',
    'ManifestRecord',
    'SampleRecord',
    'ScalePyramid',
    'build_dataset',
    'denormalize',
    'generate_sample',
    'make_pyramid',
    'normalize',
    'read_manifest',
    'resolve_fill',
    'write_manifest',
]
