"""
Dataset manifest: UTF-8 text, a commented key=value header and one
tab-separated record per line
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

from apps.core.exceptions import DatasetError

MANIFEST_FILENAME = 'manifest.tsv'
MANIFEST_MAGIC = '# pano360 manifest v1'
RECORD_COLUMNS = ('id', 'split', 'fov_deg', 'source', 'dir')


@dataclass(frozen=True)
class ManifestRecord:
    id: str
    split: str
    fov_deg: float
    source: str
    dir: str


@dataclass(frozen=True)
class DatasetManifest:
    records: Tuple[ManifestRecord, ...]
    split_ratio: float
    seed: int
    fov_min: float
    fov_max: float
    fov_law: str
    fill_value: float
    large_height: int
    view_size: int
    skipped: Tuple[str, ...] = ()
    root: Path = field(default=Path('.'), compare=False)

    def split(self, name: str) -> List[ManifestRecord]:
        return [r for r in self.records if r.split == name]

    def record_dir(self, record: ManifestRecord) -> Path:
        return self.root / record.dir


def _fmt(value) -> str:
    return f"{value:g}" if isinstance(value, float) else str(value)


def manifest_path(out_dir: Path) -> Path:
    out_dir = Path(out_dir)
    return out_dir if out_dir.is_file() else out_dir / MANIFEST_FILENAME


def write_manifest(out_dir: Path, manifest: DatasetManifest) -> Path:
    header = {
        'seed': manifest.seed,
        'split_ratio': manifest.split_ratio,
        'fov_min': manifest.fov_min,
        'fov_max': manifest.fov_max,
        'fov_law': manifest.fov_law,
        'fill_value': manifest.fill_value,
        'large_height': manifest.large_height,
        'view_size': manifest.view_size,
    }
    lines = [MANIFEST_MAGIC]
    lines += [f"# {key}={_fmt(value)}" for key, value in header.items()]
    lines += [f"# skipped={entry}" for entry in manifest.skipped]
    lines.append('\t'.join(RECORD_COLUMNS))
    for r in manifest.records:
        lines.append('\t'.join((r.id, r.split, _fmt(float(r.fov_deg)), r.source, r.dir)))

    path = Path(out_dir) / MANIFEST_FILENAME
    try:
        path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    except OSError as e:
        raise DatasetError(f"Failed to write manifest: {path}") from e
    return path


def read_manifest(location: Path) -> DatasetManifest:
    """
    Load a manifest from its file or its dataset directory

    Raises:
        DatasetError: missing file, bad header or malformed record line
    """
    path = manifest_path(location)
    try:
        lines = path.read_text(encoding='utf-8').splitlines()
    except OSError as e:
        raise DatasetError(f"Manifest not found or unreadable: {path}") from e

    if not lines or lines[0] != MANIFEST_MAGIC:
        raise DatasetError(f"Not a pano360 manifest: {path}")

    header, skipped, records = {}, [], []
    body = iter(lines[1:])
    for line in body:
        if not line.startswith('#'):
            if tuple(line.split('\t')) != RECORD_COLUMNS:
                raise DatasetError(f"Manifest column header malformed: {line!r}")
            break
        key, _, value = line[1:].strip().partition('=')
        if key == 'skipped':
            skipped.append(value)
        else:
            header[key] = value

    for lineno, line in enumerate(body, start=len(header) + len(skipped) + 3):
        if not line.strip():
            continue
        fields = line.split('\t')
        if len(fields) != len(RECORD_COLUMNS):
            raise DatasetError(f"{path}:{lineno}: expected {len(RECORD_COLUMNS)} fields, got {len(fields)}")
        rid, split, fov, source, directory = fields
        records.append(ManifestRecord(rid, split, float(fov), source, directory))

    try:
        return DatasetManifest(
            records=tuple(records),
            split_ratio=float(header['split_ratio']),
            seed=int(header['seed']),
            fov_min=float(header['fov_min']),
            fov_max=float(header['fov_max']),
            fov_law=header['fov_law'],
            fill_value=float(header['fill_value']),
            large_height=int(header['large_height']),
            view_size=int(header['view_size']),
            skipped=tuple(skipped),
            root=path.parent,
        )
    except (KeyError, ValueError) as e:
        raise DatasetError(f"Manifest header incomplete or malformed: {path} ({e})") from e
