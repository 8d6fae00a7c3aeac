"""
FOV-constrained equirect input for the synthesis network

The four views are rescaled to their relative field of view inside the side
faces of a cube map, the rest of the cube is filled, and the cube is warped to
an equirectangular panorama.
"""
from typing import Optional

import numpy as np

from apps.geometry.cubemap import cubemap_to_equirect
from apps.geometry.projection import dir_to_face, equirect_uv_to_dir, pixel_centers
from apps.geometry.types import SIDE_FACES, CubeMapFaces, EquirectPanorama, ViewSet
from apps.geometry.views import embed_block_size, embed_view_with_fov


def constrain_views(
    views: ViewSet,
    fov_deg: float,
    face_size: int,
    fill: float = 0.0,
    height: Optional[int] = None,
    law: str = 'tangent',
) -> EquirectPanorama:
    """
    Embed the views at fov_deg in their side faces and warp to equirect

    Args:
        views: normalized north, west, south, east views
        fov_deg: shared field of view in (0, 90]
        face_size: cube face size S
        fill: value of every pixel no view covers (up/down faces included)
        height: output panorama height, defaults to face_size
    """
    faces = {
        key: embed_view_with_fov(view, fov_deg, face_size, fill, law)
        for key, view in zip(SIDE_FACES, views.views)
    }
    blank = np.full((face_size, face_size, 3), fill, dtype=np.float64)
    faces['up'] = blank
    faces['down'] = blank.copy()
    return cubemap_to_equirect(CubeMapFaces(faces), height or face_size)


def empty_mask(fov_deg: float, face_size: int, height: Optional[int] = None, law: str = 'tangent') -> np.ndarray:
    """
    Pixels of constrain_views output that carry the fill value

    A pixel counts as empty when less than half of its bilinear footprint
    lands on an embedded view. Depends only on the arguments.
    """
    height = height or face_size
    s = embed_block_size(fov_deg, face_size, law)
    offset = (face_size - s) // 2
    lo, hi = offset - 0.5, offset + s - 0.5

    u, v = pixel_centers(height, 2 * height)
    index, face_u, face_v = dir_to_face(equirect_uv_to_dir(u, v))
    cols = face_u * face_size - 0.5
    rows = face_v * face_size - 0.5
    covered = (index < len(SIDE_FACES)) & (cols >= lo) & (cols <= hi) & (rows >= lo) & (rows <= hi)
    return ~covered
