"""
Sheet and wedge selections on vessel fragments.
"""

import logging
import math

import numpy as np

from core.conf import or_setting
from core.exceptions import EmptyResultError
from core.measure import radial_alignment

logger = logging.getLogger(__name__)


def band_split(sherd, direction=(0.0, 0.0, 1.0), min_alignment=None):
    """
    Separate a double-walled sherd into (inner, outer) sheets.

    Faces whose normal leans towards the axis by at least min_alignment
    form the inner sheet, those leaning away the outer sheet. Rim and base
    faces, nearly parallel to the radial plane, belong to neither.
    """
    min_alignment = or_setting(min_alignment, 'BAND_SPLIT_MIN_ALIGNMENT')
    alignment = radial_alignment(sherd, direction)
    outer = alignment >= min_alignment
    inner = alignment <= -min_alignment
    if not inner.any() or not outer.any():
        side = 'inner' if not inner.any() else 'outer'
        raise EmptyResultError(f'band_split found no {side} sheet faces')
    logger.debug('band_split: %d inner, %d outer, %d unassigned faces',
                 inner.sum(), outer.sum(),
                 sherd.triangle_count - inner.sum() - outer.sum())
    return sherd.submesh(inner), sherd.submesh(outer)


def wedge(mesh, start_deg, span_deg):
    """Faces whose centroid azimuth about +Z lies in [start, start+span)."""
    if not 0 < span_deg <= 360:
        raise ValueError('span must be in (0, 360] degrees')
    centroids = mesh.face_centroids
    azimuth = np.degrees(np.arctan2(centroids[:, 1], centroids[:, 0]))
    offset = np.mod(azimuth - start_deg, 360.0)
    keep = offset < span_deg
    if not keep.any():
        raise EmptyResultError('The wedge selects no faces')
    return mesh.submesh(keep)


def ring_indices(mesh, height, radius, tolerance=1e-6):
    """Vertices lying on the circle of given height and radius about +Z."""
    vertices = mesh.vertices
    radial = np.hypot(vertices[:, 0], vertices[:, 1])
    on_ring = ((np.abs(vertices[:, 2] - height) <= tolerance)
               & (np.abs(radial - radius) <= tolerance))
    return np.flatnonzero(on_ring)


def arc_fraction(points):
    """Share of the full turn spanned by points around +Z."""
    angles = np.sort(np.mod(np.arctan2(points[:, 1], points[:, 0]),
                            2 * math.pi))
    if len(angles) < 2:
        return 0.0
    gaps = np.diff(np.concatenate([angles, [angles[0] + 2 * math.pi]]))
    return float(1.0 - gaps.max() / (2 * math.pi))
