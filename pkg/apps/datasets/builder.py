"""
Build a dataset directory from a folder of user-supplied panoramas
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
from django.conf import settings

from apps.core.exceptions import DatasetError, PanoramaError
from apps.core.imaging import read_image_size, read_image
from apps.fov.classes import FovClassSpec
from apps.geometry.types import EquirectPanorama

from .manifest import DatasetManifest, ManifestRecord, write_manifest
from .normalization import normalize, resolve_fill
from .pyramid import check_large_height
from .samples import DEFAULT_FOV_RANGE, generate_sample

logger = logging.getLogger(__name__)

IMAGE_SUFFIXES = {'.png', '.jpg', '.jpeg'}


@dataclass(frozen=True)
class _Job:
    record: ManifestRecord
    source: Path


def _scan_sources(src_dir: Path) -> Tuple[List[Path], List[str]]:
    """Readable 2:1 images in name order, plus skip notes for the rest"""
    candidates = sorted(p for p in src_dir.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)
    valid, skipped = [], []
    for path in candidates:
        try:
            height, width = read_image_size(path)
        except DatasetError as e:
            logger.warning("Skipping %s: %s", path.name, e)
            skipped.append(f"{path.name}: unreadable")
            continue
        if width != 2 * height:
            logger.warning("Skipping %s: %dx%d is not a 2:1 panorama", path.name, height, width)
            skipped.append(f"{path.name}: not 2:1 ({height}x{width})")
            continue
        valid.append(path)
    return valid, skipped


def build_dataset(
    src_dir,
    out_dir,
    split_ratio: float = 0.8,
    fov_range: Sequence[float] = DEFAULT_FOV_RANGE,
    seed: int = 0,
    *,
    large_height: Optional[int] = None,
    view_size: Optional[int] = None,
    fov_law: Optional[str] = None,
    fill=None,
    workers: Optional[int] = None,
    fov_spec: Optional[FovClassSpec] = None,
) -> DatasetManifest:
    """
    Render samples for every panorama in src_dir and write the manifest

    The split is a seeded permutation; each record's fov is drawn uniformly
    from fov_range and snapped to the nearest classifier bin center inside it.
    Rendering runs on a thread pool; the manifest is written once at the end.

    Raises:
        DatasetError: missing/empty source directory or nothing readable in it
    """
    src_dir, out_dir = Path(src_dir), Path(out_dir)
    large_height = large_height or settings.PANO360_LARGE_HEIGHT
    view_size = view_size or settings.PANO360_VIEW_SIZE
    fov_law = fov_law or settings.PANO360_FOV_SCALE_LAW
    fill_value = resolve_fill(settings.PANO360_FILL if fill is None else fill)
    workers = workers or settings.PANO360_WORKERS
    fov_spec = fov_spec or FovClassSpec.from_settings()
    fov_min, fov_max = float(fov_range[0]), float(fov_range[1])

    check_large_height(large_height)
    if not 0.0 < split_ratio <= 1.0:
        raise DatasetError(f"Split ratio must be in (0, 1], got {split_ratio}")
    if not 0.0 < fov_min <= fov_max <= 90.0:
        raise DatasetError(f"fov range must satisfy 0 < min <= max <= 90, got [{fov_min}, {fov_max}]")
    if not src_dir.is_dir():
        raise DatasetError(f"Source directory not found: {src_dir}")

    sources, skipped = _scan_sources(src_dir)
    if not sources:
        raise DatasetError(f"No readable equirectangular images in {src_dir}")

    rng = np.random.default_rng(seed)
    order = rng.permutation(len(sources))
    n_train = int(round(split_ratio * len(sources)))
    train_indices = set(int(i) for i in order[:n_train])
    fovs = [fov_spec.snap(float(rng.uniform(fov_min, fov_max)), within=(fov_min, fov_max)) for _ in sources]

    jobs = []
    for index, (path, fov) in enumerate(zip(sources, fovs)):
        split = 'train' if index in train_indices else 'test'
        rid = f"{index:05d}_{path.stem}"
        record = ManifestRecord(id=rid, split=split, fov_deg=fov, source=path.name, dir=f"{split}/{rid}")
        jobs.append(_Job(record, path))

    def render(job: _Job) -> Optional[ManifestRecord]:
        try:
            pano = EquirectPanorama(normalize(read_image(job.source)))
            sample = generate_sample(
                pano,
                job.record.fov_deg,
                record_id=job.record.id,
                view_size=view_size,
                large_height=large_height,
                fov_range=(fov_min, fov_max),
                split=job.record.split,
            )
            sample.save(out_dir / job.record.dir)
        except PanoramaError as e:
            logger.warning("Skipping %s: %s", job.source.name, e)
            return None
        return job.record

    out_dir.mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(render, jobs))

    records = []
    for job, result in zip(jobs, results):
        if result is None:
            skipped.append(f"{job.source.name}: render failed")
        else:
            records.append(result)
    if not records:
        raise DatasetError(f"Every source in {src_dir} failed to render")

    manifest = DatasetManifest(
        records=tuple(records),
        split_ratio=float(split_ratio),
        seed=int(seed),
        fov_min=fov_min,
        fov_max=fov_max,
        fov_law=fov_law,
        fill_value=fill_value,
        large_height=int(large_height),
        view_size=int(view_size),
        skipped=tuple(skipped),
        root=out_dir,
    )
    path = write_manifest(out_dir, manifest)
    logger.info(
        "Dataset written to %s: %d train / %d test, %d skipped",
        path,
        len(manifest.split('train')),
        len(manifest.split('test')),
        len(skipped),
    )
    return manifest
