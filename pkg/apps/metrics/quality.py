"""
Full-reference image quality: PSNR and windowed SSIM
"""
import numpy as np
from scipy.ndimage import gaussian_filter

from apps.core.exceptions import GeometryError

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])
SSIM_SIGMA = 1.5
SSIM_WINDOW = 11
# gaussian_filter radius = int(truncate * sigma + 0.5) = 5, an 11-tap window
_SSIM_TRUNCATE = 3.5
_SSIM_RADIUS = SSIM_WINDOW // 2
K1, K2 = 0.01, 0.03


def _pair(a, b, what: str):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise GeometryError(f"{what}: shapes {a.shape} and {b.shape} differ")
    return a, b


def luminance(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 3 and img.shape[2] == 3:
        return img @ LUMA_WEIGHTS
    if img.ndim == 2:
        return img
    raise GeometryError(f"Expected an H x W or H x W x 3 image, got {img.shape}")


def psnr(a, b, peak: float = 255.0) -> float:
    """10 log10(peak^2 / MSE) in dB; identical images give +inf"""
    a, b = _pair(a, b, 'psnr')
    if peak <= 0:
        raise ValueError(f"peak must be positive, got {peak}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return float('inf')
    return float(10.0 * np.log10(peak**2 / mse))


def ssim(a, b, peak: float = 255.0) -> float:
    """
    Mean SSIM on luminance with an 11x11 Gaussian window (sigma 1.5)

    Window statistics come from gaussian_filter; the 5-pixel border where the
    window leaves the image is excluded from the mean.

    Raises:
        GeometryError: shape mismatch or an image smaller than the window
    """
    a, b = _pair(a, b, 'ssim')
    x, y = luminance(a), luminance(b)
    if min(x.shape) < SSIM_WINDOW:
        raise GeometryError(f"ssim needs images of at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {x.shape}")

    c1 = (K1 * peak) ** 2
    c2 = (K2 * peak) ** 2

    def blur(img):
        return gaussian_filter(img, sigma=SSIM_SIGMA, truncate=_SSIM_TRUNCATE)

    mu_x, mu_y = blur(x), blur(y)
    var_x = blur(x * x) - mu_x**2
    var_y = blur(y * y) - mu_y**2
    cov = blur(x * y) - mu_x * mu_y

    ssim_map = ((2 * mu_x * mu_y + c1) * (2 * cov + c2)) / ((mu_x**2 + mu_y**2 + c1) * (var_x + var_y + c2))
    r = _SSIM_RADIUS
    return float(np.clip(ssim_map[r:-r, r:-r].mean(), -1.0, 1.0))
