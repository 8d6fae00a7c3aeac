"""
Django management command to score a checkpoint on a manifest split
Run with: python manage.py eval --ckpt large.pt --manifest data/ --split test --out report.csv
"""
from rich.table import Table

from apps.core.management.base import PipelineCommand
from apps.datasets.manifest import read_manifest
from apps.metrics.reports import evaluate
from apps.synthesis.config import STAGES


class Command(PipelineCommand):
    help = 'SSIM/PSNR report with histograms for one manifest split'

    def add_arguments(self, parser):
        parser.add_argument('--ckpt', required=True)
        parser.add_argument('--manifest', required=True)
        parser.add_argument('--split', choices=('train', 'test'), default='test')
        parser.add_argument('--out', required=True, help='Report CSV; histogram files go beside it')
        parser.add_argument('--stage', choices=STAGES, default='large')
        parser.add_argument('--plots', action='store_true', help='Also write ssim_hist.png and psnr_hist.png')

    def handle(self, *args, **kwargs):
        manifest = read_manifest(kwargs['manifest'])
        report = evaluate(
            kwargs['ckpt'],
            manifest,
            kwargs['split'],
            kwargs['out'],
            stage=kwargs['stage'],
            plots=kwargs['plots'],
        )

        table = Table(show_header=True, header_style='bold magenta', title=f"{kwargs['split']} split")
        table.add_column('Records', style='cyan')
        table.add_column('Mean SSIM', style='green')
        table.add_column('Mean PSNR (dB)', style='yellow')
        table.add_row(str(len(report.records)), f'{report.mean_ssim:.4f}', f'{report.mean_psnr:.2f}')
        self.print_table(table)
        self.stdout.write(self.style.SUCCESS(f"✅ Report written to {kwargs['out']}"))
