"""
Equirectangular <-> cube map resampling
"""
import numpy as np

from apps.core.exceptions import GeometryError

from .projection import dir_to_face, equirect_uv_to_dir, pixel_centers, sample_face
from .types import FACE_KEYS, FACE_ORIENTATION, CubeMapFaces, EquirectPanorama
from .views import render_view


def equirect_to_cubemap(p: EquirectPanorama, face_size: int) -> CubeMapFaces:
    """Render the six 90-degree faces of a panorama"""
    if face_size < 2:
        raise GeometryError(f"Face size must be >= 2, got {face_size}")
    faces = {
        key: render_view(p, yaw, pitch, 90.0, face_size)
        for key, (yaw, pitch) in FACE_ORIENTATION.items()
    }
    return CubeMapFaces(faces)


def cubemap_to_equirect(f: CubeMapFaces, height: int, value_range: str = 'normalized') -> EquirectPanorama:
    """
    Warp six faces back onto the sphere

    Each equirect pixel is sampled (bilinear, clamped at the face border) from
    the face its ray hits.
    """
    if height < 2:
        raise GeometryError(f"Panorama height must be >= 2, got {height}")
    width = 2 * height
    u, v = pixel_centers(height, width)
    index, face_u, face_v = dir_to_face(equirect_uv_to_dir(u, v))

    out = np.zeros((height, width, 3), dtype=np.float64)
    for k, key in enumerate(FACE_KEYS):
        hit = index == k
        if np.any(hit):
            out[hit] = sample_face(f.faces[key], face_u[hit], face_v[hit])
    return EquirectPanorama(out, value_range=value_range)


def face_index_map(height: int) -> np.ndarray:
    """H x 2H map of the face (index into FACE_KEYS) each equirect pixel belongs to"""
    u, v = pixel_centers(height, 2 * height)
    index, _, _ = dir_to_face(equirect_uv_to_dir(u, v))
    return index


def face_boundary_mask(height: int) -> np.ndarray:
    """True where a pixel's right neighbour (wrapping) lies on a different face"""
    index = face_index_map(height)
    return index != np.roll(index, -1, axis=1)
