"""Umbrella-operator Laplacian smoothing."""

import logging

import numpy as np
from scipy.sparse import coo_matrix

from core.mesh import TriangleMesh

logger = logging.getLogger(__name__)


def vertex_adjacency(mesh):
    """Symmetric 0/1 vertex adjacency matrix built from triangle edges."""
    n = mesh.vertex_count
    edges = np.unique(np.sort(mesh.edges(), axis=1), axis=0)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    return coo_matrix((np.ones(len(rows)), (rows, cols)),
                      shape=(n, n)).tocsr()


def laplacian_smooth(mesh, iterations, lam):
    """
    Move every vertex toward the centroid of its edge neighbours.

    Each pass computes v + lam * (mean(neighbours) - v) for all vertices at
    once. Isolated vertices stay put and connectivity is unchanged.
    """
    if iterations < 0:
        raise ValueError('iterations must be >= 0')
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f'lambda must lie in [0, 1], got {lam}')
    if iterations == 0 or mesh.is_empty:
        return mesh

    adjacency = vertex_adjacency(mesh)
    degree = np.asarray(adjacency.sum(axis=1)).ravel()
    has_neighbours = degree > 0
    degree[~has_neighbours] = 1.0
    vertices = mesh.vertices.copy()
    for _ in range(iterations):
        centroids = (adjacency @ vertices) / degree[:, None]
        step = lam * (centroids - vertices)
        step[~has_neighbours] = 0.0
        vertices = vertices + step
    logger.debug('Smoothed %d vertices over %d passes (lambda %.3f)',
                 mesh.vertex_count, iterations, lam)
    return TriangleMesh(vertices, mesh.triangles, None)
