"""
Evaluation reports: per-record SSIM/PSNR, summary means and histograms
"""
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple, Union

import matplotlib
import numpy as np
import pandas as pd

from apps.core.exceptions import DatasetError
from apps.core.imaging import read_image
from apps.datasets.manifest import DatasetManifest, ManifestRecord
from apps.datasets.pyramid import SCALE_NAMES
from apps.datasets.samples import PYRAMID_FILES, load_views
from apps.geometry.types import EquirectPanorama, ViewSet
from apps.synthesis.inference import Synthesizer

from .quality import SSIM_SIGMA, SSIM_WINDOW, psnr, ssim

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 50
HISTOGRAM_RANGES = {'ssim': (0.0, 1.0), 'psnr_db': (5.0, 40.0)}
PEAK = 255.0
CONVENTIONS = {
    'ssim_channel': 'luminance 0.299/0.587/0.114',
    'ssim_window': f'gaussian {SSIM_WINDOW}x{SSIM_WINDOW} sigma {SSIM_SIGMA}',
    'psnr_peak': f'{PEAK:g} on uint8 renderings',
    'psnr_identical': 'inf',
}

Predictor = Callable[[ViewSet, ManifestRecord], Union[EquirectPanorama, np.ndarray]]


def histogram(values, lo: float, hi: float, bins: int = HISTOGRAM_BINS) -> Tuple[np.ndarray, np.ndarray]:
    """
    Uniform histogram over [lo, hi]; values outside (infinities included)
    land in the edge bins, so counts always sum to len(values)
    """
    clipped = np.clip(np.asarray(values, dtype=np.float64), lo, hi)
    counts, edges = np.histogram(clipped, bins=bins, range=(lo, hi))
    return edges, counts


@dataclass
class EvalReport:
    records: pd.DataFrame
    histograms: Dict[str, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    @property
    def mean_ssim(self) -> float:
        return float(self.records['ssim'].mean())

    @property
    def mean_psnr(self) -> float:
        return float(self.records['psnr_db'].mean())

    @classmethod
    def from_rows(cls, rows) -> 'EvalReport':
        frame = pd.DataFrame(rows, columns=['id', 'ssim', 'psnr_db'])
        histograms = {
            metric: histogram(frame[metric].to_numpy(), lo, hi) for metric, (lo, hi) in HISTOGRAM_RANGES.items()
        }
        return cls(records=frame, histograms=histograms)

    def histogram_frame(self, metric: str) -> pd.DataFrame:
        edges, counts = self.histograms[metric]
        return pd.DataFrame({'bin_lo': edges[:-1], 'bin_hi': edges[1:], 'count': counts})

    def write(self, out: Union[str, Path], plots: bool = False) -> Path:
        """
        report CSV with a commented conventions/summary header, plus
        ssim_hist.csv and psnr_hist.csv (and .png charts with plots) beside it
        """
        out = Path(out)
        out.parent.mkdir(parents=True, exist_ok=True)
        header = dict(CONVENTIONS)
        header.update(records=len(self.records), mean_ssim=f'{self.mean_ssim:.8g}', mean_psnr_db=f'{self.mean_psnr:.8g}')
        with out.open('w', encoding='utf-8', newline='') as fh:
            for key, value in header.items():
                fh.write(f'# {key}={value}\n')
            self.records.to_csv(fh, index=False, float_format='%.8g')

        for metric, stem in (('ssim', 'ssim_hist'), ('psnr_db', 'psnr_hist')):
            frame = self.histogram_frame(metric)
            frame.to_csv(out.parent / f'{stem}.csv', index=False, float_format='%.8g')
            if plots:
                plot_histogram(frame, metric, out.parent / f'{stem}.png')
        return out


def plot_histogram(frame: pd.DataFrame, metric: str, path: Path) -> Path:
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 3.5))
    widths = frame['bin_hi'] - frame['bin_lo']
    ax.bar(frame['bin_lo'], frame['count'], width=widths, align='edge', edgecolor='black', linewidth=0.3)
    ax.set_xlabel('PSNR (dB)' if metric == 'psnr_db' else 'SSIM')
    ax.set_ylabel('records')
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path


def _as_uint8(pred) -> np.ndarray:
    pixels = pred.pixels if isinstance(pred, EquirectPanorama) else pred
    return np.asarray(pixels)


def checkpoint_predictor(ckpt, stage: str = 'large') -> Predictor:
    synthesizer = Synthesizer(ckpt, stage)

    def predict(views: ViewSet, record: ManifestRecord):
        pano, _ = synthesizer(views)
        return pano

    return predict


def evaluate(
    ckpt,
    manifest: DatasetManifest,
    split: str = 'test',
    out_report: Optional[Union[str, Path]] = None,
    *,
    stage: str = 'large',
    predictor: Optional[Predictor] = None,
    plots: bool = False,
) -> EvalReport:
    """
    Score each record of a split against its ground-truth panorama

    predictor defaults to checkpoint inference with the classifier's fov.

    Raises:
        DatasetError: empty split or missing ground truth
        CheckpointError: checkpoint without the stage's groups
    """
    records = manifest.split(split)
    if not records:
        raise DatasetError(f"Split '{split}' of {manifest.root} is empty")
    scale = SCALE_NAMES.get(stage, stage)
    predictor = predictor or checkpoint_predictor(ckpt, stage)

    rows = []
    for record in records:
        directory = manifest.record_dir(record)
        gt_path = directory / PYRAMID_FILES[scale]
        if not gt_path.exists():
            raise DatasetError(f"Missing ground truth for record {record.id}: {gt_path}")
        gt = read_image(gt_path)
        pred = _as_uint8(predictor(load_views(directory), record))
        rows.append({'id': record.id, 'ssim': ssim(pred, gt, PEAK), 'psnr_db': psnr(pred, gt, PEAK)})
        logger.debug("%s: ssim %.4f psnr %.2f dB", record.id, rows[-1]['ssim'], rows[-1]['psnr_db'])

    report = EvalReport.from_rows(rows)
    logger.info(
        "Evaluated %d %s records: mean SSIM %.4f, mean PSNR %.2f dB",
        len(rows),
        split,
        report.mean_ssim,
        report.mean_psnr,
    )
    if out_report is not None:
        report.write(out_report, plots=plots)
    return report
