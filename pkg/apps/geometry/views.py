"""
Perspective view rendering and FOV-constrained view embedding
"""
import numpy as np

from apps.core.exceptions import GeometryError
from apps.core.imaging import resize_image

from .projection import camera_rays, pixel_centers, sample_equirect
from .types import EquirectPanorama

FOV_SCALE_LAWS = ('tangent', 'linear')


def render_view(p: EquirectPanorama, yaw_deg: float, pitch_deg: float, fov_deg: float, out_size: int) -> np.ndarray:
    """
    Pinhole rendering of a panorama

    At fov 90 with pitch 0 or +-90 this is, bit for bit, the matching cube face
    of equirect_to_cubemap, which renders its faces through this function.

    Raises:
        GeometryError: fov outside (0, 120]
    """
    if not 0.0 < fov_deg <= 120.0:
        raise GeometryError(f"View fov must be in (0, 120] degrees, got {fov_deg}")
    if out_size < 1:
        raise GeometryError(f"View size must be positive, got {out_size}")
    u, v = pixel_centers(out_size, out_size)
    rays = camera_rays(yaw_deg, pitch_deg, fov_deg, u, v)
    return sample_equirect(p.pixels, rays)


def embed_block_size(fov_deg: float, face_size: int, law: str = 'tangent') -> int:
    """
    Side length s of the rescaled view inside a 90-degree face

    tangent: s = S * tan(fov / 2) / tan(45)   (perspective containment)
    linear:  s = S * fov / 90
    """
    if not 0.0 < fov_deg <= 90.0:
        raise GeometryError(f"Embedding fov must be in (0, 90] degrees, got {fov_deg}")
    if law == 'tangent':
        ratio = 1.0 if fov_deg == 90.0 else np.tan(np.deg2rad(fov_deg) / 2.0)
    elif law == 'linear':
        ratio = fov_deg / 90.0
    else:
        raise GeometryError(f"Unknown fov scale law '{law}', expected one of {FOV_SCALE_LAWS}")
    return max(1, min(face_size, int(round(face_size * ratio))))


def embed_mask(fov_deg: float, face_size: int, law: str = 'tangent') -> np.ndarray:
    """Boolean S x S mask, True where embed_view_with_fov writes the fill value"""
    s = embed_block_size(fov_deg, face_size, law)
    offset = (face_size - s) // 2
    mask = np.ones((face_size, face_size), dtype=bool)
    mask[offset:offset + s, offset:offset + s] = False
    return mask


def embed_view_with_fov(
    img: np.ndarray,
    fov_deg: float,
    face_size: int,
    fill_value: float = 0.0,
    law: str = 'tangent',
) -> np.ndarray:
    """
    Place a view at its relative scale in the center of a 90-degree face

    The view is resampled to an s x s block (see embed_block_size); every other
    pixel gets fill_value. fov 90 leaves no fill pixels.
    """
    s = embed_block_size(fov_deg, face_size, law)
    offset = (face_size - s) // 2
    face = np.full((face_size, face_size, img.shape[2]), fill_value, dtype=np.float64)
    face[offset:offset + s, offset:offset + s] = resize_image(np.asarray(img, dtype=np.float64), (s, s))
    return face
