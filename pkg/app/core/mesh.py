"""
Triangle mesh container shared by every stage of the pipeline.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from core.conf import or_setting


def _frozen(array, dtype):
    """Return a read-only contiguous copy of array."""
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """Indexed triangle surface in millimetres."""
    vertices: np.ndarray
    triangles: np.ndarray
    normals: np.ndarray = None

    def __post_init__(self):
        vertices = np.asarray(self.vertices, dtype=np.float64)
        if vertices.size == 0:
            vertices = vertices.reshape(0, 3)
        triangles = np.asarray(self.triangles, dtype=np.int64)
        if triangles.size == 0:
            triangles = triangles.reshape(0, 3)

        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise ValueError('vertices must have shape (n, 3)')
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise ValueError('triangles must have shape (m, 3)')
        if not np.all(np.isfinite(vertices)):
            raise ValueError('vertex coordinates must be finite')
        if len(triangles):
            if triangles.min() < 0 or triangles.max() >= len(vertices):
                raise ValueError('triangle index out of range')
            if np.any(
                (triangles[:, 0] == triangles[:, 1])
                | (triangles[:, 1] == triangles[:, 2])
                | (triangles[:, 0] == triangles[:, 2])
            ):
                raise ValueError('triangle repeats a vertex index')

        object.__setattr__(self, 'vertices', _frozen(vertices, np.float64))
        object.__setattr__(self, 'triangles', _frozen(triangles, np.int64))

        if self.normals is not None:
            normals = np.asarray(self.normals, dtype=np.float64)
            if normals.shape != vertices.shape:
                raise ValueError('normals must match vertices')
            lengths = np.linalg.norm(normals, axis=1, keepdims=True)
            lengths[lengths == 0] = 1.0
            object.__setattr__(self, 'normals', _frozen(normals / lengths,
                                                         np.float64))

    def __repr__(self):
        return (f'TriangleMesh(vertices={self.vertex_count}, '
                f'triangles={self.triangle_count})')

    @classmethod
    def empty(cls):
        """Return a mesh with no vertices and no triangles."""
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))

    @classmethod
    def concatenate(cls, meshes):
        """Join meshes into one, offsetting triangle indices."""
        meshes = list(meshes)
        if not meshes:
            return cls.empty()
        vertices, triangles, offset = [], [], 0
        for mesh in meshes:
            vertices.append(mesh.vertices)
            triangles.append(mesh.triangles + offset)
            offset += mesh.vertex_count
        return cls(np.vstack(vertices), np.vstack(triangles))

    @property
    def vertex_count(self):
        return len(self.vertices)

    @property
    def triangle_count(self):
        return len(self.triangles)

    @property
    def is_empty(self):
        return self.triangle_count == 0

    @property
    def bounds(self):
        """Axis-aligned bounding box as (min, max)."""
        if self.vertex_count == 0:
            zero = np.zeros(3)
            return zero, zero
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    @property
    def diagonal(self):
        low, high = self.bounds
        return float(np.linalg.norm(high - low))

    @property
    def corners(self):
        """Triangle corner coordinates with shape (m, 3, 3)."""
        return self.vertices[self.triangles]

    @property
    def face_normals(self):
        """Unit normals following the right-hand winding rule."""
        corners = self.corners
        cross = np.cross(corners[:, 1] - corners[:, 0],
                         corners[:, 2] - corners[:, 0])
        lengths = np.linalg.norm(cross, axis=1, keepdims=True)
        lengths[lengths == 0] = 1.0
        return cross / lengths

    @property
    def face_areas(self):
        corners = self.corners
        cross = np.cross(corners[:, 1] - corners[:, 0],
                         corners[:, 2] - corners[:, 0])
        return 0.5 * np.linalg.norm(cross, axis=1)

    @property
    def face_centroids(self):
        return self.corners.mean(axis=1)

    def vertex_normals(self):
        """Area-weighted vertex normals."""
        corners = self.corners
        cross = np.cross(corners[:, 1] - corners[:, 0],
                         corners[:, 2] - corners[:, 0])
        accumulated = np.zeros_like(self.vertices)
        for corner in range(3):
            np.add.at(accumulated, self.triangles[:, corner], cross)
        lengths = np.linalg.norm(accumulated, axis=1, keepdims=True)
        lengths[lengths == 0] = 1.0
        return accumulated / lengths

    def edges(self):
        """Directed half-edges, three per triangle, shape (3m, 2)."""
        t = self.triangles
        return np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])

    def with_vertices(self, vertices):
        """Return a mesh with new coordinates and the same connectivity."""
        return TriangleMesh(vertices, self.triangles)

    def transformed(self, rotation=None, translation=None, scale=1.0):
        """Apply x -> scale * R x + t to every vertex."""
        vertices = self.vertices * float(scale)
        if rotation is not None:
            vertices = vertices @ np.asarray(rotation, dtype=np.float64).T
        if translation is not None:
            vertices = vertices + np.asarray(translation, dtype=np.float64)
        return TriangleMesh(vertices, self.triangles)

    def translated(self, offset):
        return self.transformed(translation=offset)

    def flipped(self):
        """Reverse every triangle winding."""
        return TriangleMesh(self.vertices, self.triangles[:, ::-1])

    def submesh(self, mask):
        """Keep the selected triangles and drop unreferenced vertices."""
        mask = np.asarray(mask)
        triangles = self.triangles[mask]
        used, inverse = np.unique(triangles, return_inverse=True)
        normals = None if self.normals is None else self.normals[used]
        return TriangleMesh(
            self.vertices[used],
            inverse.reshape(-1, 3),
            normals,
        )

    def compacted(self):
        """Drop vertices no triangle references."""
        return self.submesh(np.ones(self.triangle_count, dtype=bool))


def weld(mesh, tolerance=None):
    """
    Merge vertices closer than tolerance.

    Clusters are the connected components of the "closer than tolerance"
    graph found through a k-d tree; each cluster keeps the coordinates of
    its lowest-index vertex. Triangles that collapse are removed.
    """
    tolerance = or_setting(tolerance, 'WELD_TOLERANCE_MM')
    if mesh.vertex_count == 0:
        return mesh
    n = mesh.vertex_count
    if tolerance > 0:
        pairs = cKDTree(mesh.vertices).query_pairs(tolerance,
                                                   output_type='ndarray')
    else:
        pairs = np.zeros((0, 2), dtype=np.int64)
    if len(pairs) == 0 and tolerance > 0:
        return mesh

    if tolerance > 0:
        graph = coo_matrix(
            (np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n)
        )
        _, labels = connected_components(graph, directed=False)
    else:
        _, labels = np.unique(mesh.vertices, axis=0, return_inverse=True)
        labels = labels.reshape(-1)

    # Renumber clusters by first occurrence so the output is order stable.
    first = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n))
    order = np.argsort(first, kind='stable')
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))

    vertices = mesh.vertices[first[order]]
    triangles = rank[labels[mesh.triangles]]
    keep = ((triangles[:, 0] != triangles[:, 1])
            & (triangles[:, 1] != triangles[:, 2])
            & (triangles[:, 0] != triangles[:, 2]))
    return TriangleMesh(vertices, triangles[keep]).compacted()
