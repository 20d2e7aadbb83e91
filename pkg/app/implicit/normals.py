"""
Oriented normals for unstructured point clouds.

Normals come from local PCA; their signs are made consistent by walking a
minimum spanning tree of the k-nearest-neighbour graph.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse import csgraph
from scipy.spatial import cKDTree

from core.conf import or_setting
from core.exceptions import DegenerateGeometryError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OrientedPointCloud:
    """Points in mm with one unit normal each."""
    points: np.ndarray
    normals: np.ndarray
    degenerate: np.ndarray = None

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64).reshape(-1, 3)
        normals = np.array(self.normals, dtype=np.float64).reshape(-1, 3)
        if len(points) != len(normals):
            raise ValueError('points and normals differ in count')
        lengths = np.linalg.norm(normals, axis=1)
        if len(normals) and np.max(np.abs(lengths - 1.0)) > 1e-6:
            raise ValueError('normals must be unit length')
        degenerate = (np.zeros(len(points), dtype=bool)
                      if self.degenerate is None
                      else np.array(self.degenerate, dtype=bool))
        for array in (points, normals, degenerate):
            array.setflags(write=False)
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'normals', normals)
        object.__setattr__(self, 'degenerate', degenerate)

    def __len__(self):
        return len(self.points)

    def flipped(self):
        return OrientedPointCloud(self.points, -self.normals,
                                  self.degenerate)

    def translated(self, offset):
        return OrientedPointCloud(self.points + np.asarray(offset),
                                  self.normals, self.degenerate)


def _pca_normals(points, neighbours):
    local = points[neighbours]
    centred = local - local.mean(axis=1, keepdims=True)
    covariance = np.einsum('nki,nkj->nij', centred, centred)
    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    return eigenvectors[:, :, 0], eigenvalues


def _propagate_signs(normals, neighbours):
    """Flip normals along an MST so neighbours agree."""
    n = len(normals)
    rows = np.repeat(np.arange(n), neighbours.shape[1])
    cols = neighbours.ravel()
    keep = rows != cols
    rows, cols = rows[keep], cols[keep]
    dots = np.abs(np.einsum('ij,ij->i', normals[rows], normals[cols]))
    # Shifted so that parallel neighbours keep a non-zero edge weight.
    graph = coo_matrix((2.0 - dots, (rows, cols)), shape=(n, n)).tocsr()
    graph = graph.maximum(graph.T)
    tree = csgraph.minimum_spanning_tree(graph)
    tree = tree + tree.T
    count, labels = csgraph.connected_components(tree, directed=False)

    signs = np.ones(n)
    for label in range(count):
        root = int(np.argmax(labels == label))
        order, parents = csgraph.breadth_first_order(
            tree, root, directed=False, return_predecessors=True)
        children = order[1:]
        agree = np.einsum('ij,ij->i', normals[children],
                          normals[parents[children]]) >= 0
        relative = np.where(agree, 1.0, -1.0)
        for child, parent, step in zip(children, parents[children],
                                       relative):
            signs[child] = signs[parent] * step
    return signs, labels, count


def estimate_normals(points, k=None):
    """
    Estimate an outward normal per point from its k nearest neighbours.

    Each connected piece of the neighbour graph is signed so that most of
    its normals point away from the centroid of the whole cloud.
    Neighbourhoods that do not span a plane take the normal of the nearest
    point that does and are flagged in the result.
    """
    k = or_setting(k, 'NORMALS_K')
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if k < 3:
        raise ValueError(f'k must be at least 3, got {k}')
    if len(points) <= k:
        raise ValueError(f'{len(points)} points are too few for k={k}')

    tree = cKDTree(points)
    _, neighbours = tree.query(points, k=k + 1)
    normals, eigenvalues = _pca_normals(points, neighbours)

    scale = float(np.linalg.norm(np.ptp(points, axis=0)))
    degenerate = eigenvalues[:, 1] <= (1e-9 * scale) ** 2 * (k + 1)
    if degenerate.all():
        raise DegenerateGeometryError(
            1, 'No neighbourhood spans a plane; cannot estimate normals')
    if degenerate.any():
        good = np.flatnonzero(~degenerate)
        _, nearest = cKDTree(points[good]).query(points[degenerate])
        normals[degenerate] = normals[good[nearest]]
        logger.warning('%d points have degenerate neighbourhoods',
                       int(degenerate.sum()))

    signs, labels, count = _propagate_signs(normals, neighbours)
    normals *= signs[:, None]

    outward = np.einsum('ij,ij->i', points - points.mean(axis=0), normals)
    for label in range(count):
        member = labels == label
        if np.sum(outward[member] > 0) < np.sum(outward[member] < 0):
            normals[member] *= -1.0
    logger.debug('Estimated %d normals (k=%d) in %d connected pieces',
                 len(points), k, count)
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    return OrientedPointCloud(points, normals, degenerate)
