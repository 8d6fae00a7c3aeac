"""
Direction <-> pixel mappings and the shared equirect sampler

Conventions:
    - right-handed frame, y up, z toward the north view center, x toward west
    - azimuth 0 at north, increasing toward west; u = azimuth / 360 + 0.5 (mod 1)
    - v = (90 - elevation) / 180, so v = 0 is straight up
    - pixel (i, j) of an H x W image has its center at u = (j + 0.5) / W, v = (i + 0.5) / H
"""
from typing import Tuple, Union

import numpy as np
from scipy import ndimage

from apps.core.exceptions import GeometryError

from .types import FACE_KEYS, FACE_ORIENTATION, Direction

ArrayOrFloat = Union[np.ndarray, float]


def _cos_sin(degrees: float) -> Tuple[float, float]:
    """cos/sin that are exact at multiples of 90 degrees"""
    quarter, rest = divmod(float(degrees), 90.0)
    if rest == 0.0:
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[int(quarter) % 4]
    rad = np.deg2rad(degrees)
    return float(np.cos(rad)), float(np.sin(rad))


def _half_tan(fov_deg: float) -> float:
    if fov_deg == 90.0:
        return 1.0
    return float(np.tan(np.deg2rad(fov_deg) / 2.0))


def camera_basis(yaw_deg: float, pitch_deg: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(forward, right, up) unit vectors of a pinhole camera at (yaw, pitch)"""
    cy, sy = _cos_sin(yaw_deg)
    cp, sp = _cos_sin(pitch_deg)
    forward = np.array([cp * sy, sp, cp * cy])
    right = np.array([cy, 0.0, -sy])
    up = np.array([-sp * sy, cp, -sp * cy])
    return forward, right, up


def camera_rays(yaw_deg: float, pitch_deg: float, fov_deg: float, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Unit rays (..., 3) through image coordinates (u, v) of a square pinhole camera"""
    forward, right, up = camera_basis(yaw_deg, pitch_deg)
    t = _half_tan(fov_deg)
    a = (2.0 * np.asarray(u, dtype=np.float64) - 1.0) * t
    b = (1.0 - 2.0 * np.asarray(v, dtype=np.float64)) * t
    rays = forward + a[..., None] * right + b[..., None] * up
    return rays / np.linalg.norm(rays, axis=-1, keepdims=True)


def pixel_centers(height: int, width: int) -> Tuple[np.ndarray, np.ndarray]:
    """(u, v) grids of pixel centers, each shaped (height, width)"""
    u = (np.arange(width, dtype=np.float64) + 0.5) / width
    v = (np.arange(height, dtype=np.float64) + 0.5) / height
    return np.meshgrid(u, v)


def dir_to_equirect_uv(d: Union[Direction, np.ndarray]) -> Tuple[ArrayOrFloat, ArrayOrFloat]:
    """
    Map unit directions to equirect coordinates

    Poles (no defined azimuth) get u = 0.
    """
    scalar = isinstance(d, Direction)
    vec = d.as_array() if scalar else np.asarray(d, dtype=np.float64)
    x, y, z = vec[..., 0], vec[..., 1], vec[..., 2]
    horizontal = np.hypot(x, z)
    azimuth = np.arctan2(x, z)
    elevation = np.arctan2(y, horizontal)
    u = np.mod(azimuth / (2.0 * np.pi) + 0.5, 1.0)
    u = np.where((horizontal < 1e-12) | (u >= 1.0), 0.0, u)
    v = (np.pi / 2.0 - elevation) / np.pi
    if scalar:
        return float(u), float(v)
    return u, v


def equirect_uv_to_dir(u: ArrayOrFloat, v: ArrayOrFloat) -> np.ndarray:
    """Inverse of dir_to_equirect_uv; returns (..., 3) unit vectors"""
    azimuth = (np.asarray(u, dtype=np.float64) - 0.5) * 2.0 * np.pi
    elevation = np.pi / 2.0 - np.asarray(v, dtype=np.float64) * np.pi
    cos_el = np.cos(elevation)
    return np.stack([cos_el * np.sin(azimuth), np.sin(elevation), cos_el * np.cos(azimuth)], axis=-1)


def face_uv_to_dir(face_key: str, u: ArrayOrFloat, v: ArrayOrFloat, fov_deg: float = 90.0):
    """
    View ray through pixel (u, v) of a square pinhole camera looking along a face axis

    Raises:
        GeometryError: unknown face or fov outside (0, 180)
    """
    if face_key not in FACE_ORIENTATION:
        raise GeometryError(f"Unknown cube face '{face_key}'")
    if not 0.0 < fov_deg < 180.0:
        raise GeometryError(f"fov must be in (0, 180) degrees, got {fov_deg}")
    yaw, pitch = FACE_ORIENTATION[face_key]
    rays = camera_rays(yaw, pitch, fov_deg, u, v)
    if np.ndim(u) == 0 and np.ndim(v) == 0:
        return Direction(*(float(c) for c in rays))
    return rays


_FACE_BASES = np.stack([np.stack(camera_basis(*FACE_ORIENTATION[k])) for k in FACE_KEYS])


def dir_to_face(d: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Major-axis face selection

    Returns:
        (face index into FACE_KEYS, u, v) with u, v the in-face coordinates at 90 degrees fov
    """
    d = np.asarray(d, dtype=np.float64)
    x, y, z = d[..., 0], d[..., 1], d[..., 2]
    ax, ay, az = np.abs(x), np.abs(y), np.abs(z)

    index = np.where(x >= 0, 1, 3)
    index = np.where((az >= ax), np.where(z >= 0, 0, 2), index)
    index = np.where((ay >= ax) & (ay >= az), np.where(y >= 0, 4, 5), index)

    basis = _FACE_BASES[index]
    forward, right, up = basis[..., 0, :], basis[..., 1, :], basis[..., 2, :]
    depth = np.sum(d * forward, axis=-1)
    a = np.sum(d * right, axis=-1) / depth
    b = np.sum(d * up, axis=-1) / depth
    return index, (a + 1.0) / 2.0, (1.0 - b) / 2.0


def sample_equirect(pixels: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """
    Bilinear lookup of an equirect image along directions

    Columns wrap around in azimuth; rows clamp at the poles.

    Args:
        pixels: H x W x C array
        directions: (..., 3) unit vectors

    Returns:
        (..., C) float64 samples
    """
    height, width = pixels.shape[:2]
    u, v = dir_to_equirect_uv(directions)
    cols = u * width - 0.5 + 1.0  # +1 for the wrap column padded on the left
    rows = v * height - 0.5
    padded = np.pad(np.asarray(pixels, dtype=np.float64), ((0, 0), (1, 1), (0, 0)), mode='wrap')
    coords = np.stack([rows.ravel(), cols.ravel()])
    channels = [
        ndimage.map_coordinates(padded[..., c], coords, order=1, mode='nearest')
        for c in range(pixels.shape[2])
    ]
    return np.stack(channels, axis=-1).reshape(*np.shape(u), pixels.shape[2])


def sample_face(face: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Bilinear lookup inside one square face, clamped at its border"""
    size = face.shape[0]
    coords = np.stack([np.ravel(v) * size - 0.5, np.ravel(u) * size - 0.5])
    channels = [
        ndimage.map_coordinates(np.asarray(face[..., c], dtype=np.float64), coords, order=1, mode='nearest')
        for c in range(face.shape[2])
    ]
    return np.stack(channels, axis=-1)
