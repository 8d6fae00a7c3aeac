"""
Spherical image geometry: direction/pixel mappings, equirect <-> cube map
resampling, perspective views and FOV-constrained view embedding
"""
from .cubemap import cubemap_to_equirect, equirect_to_cubemap, face_boundary_mask
from .projection import dir_to_equirect_uv, dir_to_face, equirect_uv_to_dir, face_uv_to_dir, sample_equirect
from .types import FACE_KEYS, SIDE_FACES, CubeMapFaces, Direction, EquirectPanorama, ViewSet
from .views import embed_block_size, embed_mask, embed_view_with_fov, render_view

__all__ = [
    'FACE_KEYS',
    'SIDE_FACES',
    'CubeMapFaces',
    'Direction',
    'EquirectPanorama',
    'ViewSet',
    'cubemap_to_equirect',
    'dir_to_equirect_uv',
    'dir_to_face',
    'embed_block_size',
    'embed_mask',
    'embed_view_with_fov',
    'equirect_to_cubemap',
    'equirect_uv_to_dir',
    'face_boundary_mask',
    'face_uv_to_dir',
    'render_view',
    'sample_equirect',
]
