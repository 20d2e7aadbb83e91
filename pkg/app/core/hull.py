"""
Convex hull of a point set as an outward-oriented triangle mesh.
"""

import logging

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from core.conf import or_setting
from core.exceptions import DegenerateGeometryError
from core.mesh import TriangleMesh

logger = logging.getLogger(__name__)


def spanned_dimension(points, eps=None):
    """
    Number of principal directions along which points have extent.

    An extent counts when it exceeds eps times the bounding-box diagonal.
    """
    eps = or_setting(eps, 'HULL_DEGENERACY_EPS')
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(points) < 2:
        return 0
    diagonal = float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
    if diagonal == 0.0:
        return 0
    centred = points - points.mean(axis=0)
    _, _, axes = np.linalg.svd(centred, full_matrices=False)
    projected = centred @ axes.T
    extents = projected.max(axis=0) - projected.min(axis=0)
    return int(np.sum(extents > eps * diagonal))


def convex_hull(points, eps=None):
    """Return the watertight, outward-oriented convex hull of points."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(points) == 0:
        raise ValueError('convex_hull needs at least 4 points')
    if not np.all(np.isfinite(points)):
        raise ValueError('point coordinates must be finite')
    dimension = spanned_dimension(points, eps)
    if dimension < 3 or len(points) < 4:
        raise DegenerateGeometryError(min(dimension, 2))

    try:
        hull = ConvexHull(points)
    except QhullError as exc:
        raise DegenerateGeometryError(2, f'Qhull failed: {exc}') from exc

    triangles = hull.simplices.copy()
    corners = points[triangles]
    normals = np.cross(corners[:, 1] - corners[:, 0],
                       corners[:, 2] - corners[:, 0])
    inward = np.einsum('ij,ij->i', normals, hull.equations[:, :3]) < 0
    triangles[inward] = triangles[inward][:, ::-1]

    logger.debug('Hull of %d points has %d vertices and %d facets',
                 len(points), len(hull.vertices), len(triangles))
    return TriangleMesh(points, triangles).compacted()


def contains(hull_mesh, points, tolerance=1e-6):
    """Whether each point lies inside or on an outward hull mesh."""
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    normals = hull_mesh.face_normals
    offsets = np.einsum('ij,ij->i', normals, hull_mesh.corners[:, 0])
    signed = points @ normals.T - offsets
    return np.all(signed <= tolerance, axis=1)
