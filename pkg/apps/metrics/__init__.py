"""
Image quality metrics and evaluation reports
"""
from .quality import psnr, ssim
from .reports import EvalReport, evaluate, histogram

__all__ = ['EvalReport', 'evaluate', 'histogram', 'psnr', 'ssim']
