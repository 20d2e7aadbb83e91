"""
User-driven edits of fragment meshes.
"""

import logging

import numpy as np

from core.exceptions import EmptyResultError

logger = logging.getLogger(__name__)

KEEP = ('inside', 'outside')


def crop_fragment(mesh, box, keep='inside'):
    """
    Keep the triangles whose centroid lies inside (or outside) box.

    box is ((x0, y0, z0), (x1, y1, z1)) with inclusive bounds. The result
    may have open boundaries.
    """
    if keep not in KEEP:
        raise ValueError(f'keep must be one of {KEEP}')
    low, high = (np.asarray(corner, dtype=np.float64) for corner in box)
    if low.shape != (3,) or high.shape != (3,) or np.any(low > high):
        raise ValueError('Crop box must be (low, high) corners in 3D')

    centroids = mesh.face_centroids
    inside = np.all((centroids >= low) & (centroids <= high), axis=1)
    kept = inside if keep == 'inside' else ~inside
    if kept.all():
        return mesh
    if not kept.any():
        raise EmptyResultError(f'Cropping {keep} the box removes every '
                               'triangle')
    logger.info('Cropped %d of %d triangles', int((~kept).sum()),
                mesh.triangle_count)
    return mesh.submesh(kept)
