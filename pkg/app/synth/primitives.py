"""
Closed, outward-oriented test solids.
"""

import numpy as np

from core.mesh import TriangleMesh

BOX_TRIANGLES = np.array([
    [0, 2, 1], [0, 3, 2],  # -z
    [4, 5, 6], [4, 6, 7],  # +z
    [0, 1, 5], [0, 5, 4],  # -y
    [2, 3, 7], [2, 7, 6],  # +y
    [1, 2, 6], [1, 6, 5],  # +x
    [0, 4, 7], [0, 7, 3],  # -x
])


def box(size=(1.0, 1.0, 1.0), center=None):
    """Axis-aligned box; the minimum corner sits at the origin by default."""
    sx, sy, sz = size
    vertices = np.array([
        [0, 0, 0], [sx, 0, 0], [sx, sy, 0], [0, sy, 0],
        [0, 0, sz], [sx, 0, sz], [sx, sy, sz], [0, sy, sz],
    ], dtype=np.float64)
    if center is not None:
        vertices += np.asarray(center, dtype=np.float64) - np.array(size) / 2
    return TriangleMesh(vertices, BOX_TRIANGLES)


def cube(edge=1.0, center=None):
    return box((edge, edge, edge), center)


def _icosahedron():
    phi = (1.0 + 5 ** 0.5) / 2.0
    vertices = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=np.float64)
    triangles = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ])
    return vertices, triangles


def _subdivide(vertices, triangles):
    """Split every triangle into four through shared edge midpoints."""
    edges = np.sort(np.concatenate([
        triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]],
    ]), axis=1)
    unique, inverse = np.unique(edges, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    midpoints = vertices[unique].mean(axis=1)
    m = len(triangles)
    mid = len(vertices) + inverse.reshape(3, m).T
    a, b, c = triangles.T
    ab, bc, ca = mid.T
    new = np.concatenate([
        np.stack([a, ab, ca], axis=1),
        np.stack([b, bc, ab], axis=1),
        np.stack([c, ca, bc], axis=1),
        np.stack([ab, bc, ca], axis=1),
    ])
    return np.vstack([vertices, midpoints]), new


def icosphere(radius=1.0, subdivisions=3, center=(0.0, 0.0, 0.0)):
    """Geodesic sphere from a subdivided icosahedron."""
    vertices, triangles = _icosahedron()
    vertices /= np.linalg.norm(vertices, axis=1, keepdims=True)
    for _ in range(subdivisions):
        vertices, triangles = _subdivide(vertices, triangles)
        vertices /= np.linalg.norm(vertices, axis=1, keepdims=True)
    return TriangleMesh(vertices * radius + np.asarray(center), triangles)


def cylinder(radius=1.0, height=1.0, segments=64, capped=True):
    """Cylinder around +Z with its base on z = 0."""
    if segments < 3:
        raise ValueError('a cylinder needs at least 3 segments')
    angles = 2.0 * np.pi * np.arange(segments) / segments
    ring = np.column_stack([radius * np.cos(angles),
                            radius * np.sin(angles),
                            np.zeros(segments)])
    top = ring + [0.0, 0.0, height]
    vertices = [ring, top]
    i = np.arange(segments)
    j = (i + 1) % segments
    faces = [np.stack([i, j, segments + j], axis=1),
             np.stack([i, segments + j, segments + i], axis=1)]
    if capped:
        bottom_centre, top_centre = 2 * segments, 2 * segments + 1
        vertices.append([[0.0, 0.0, 0.0], [0.0, 0.0, height]])
        faces.append(np.stack([np.full(segments, bottom_centre), j, i],
                              axis=1))
        faces.append(np.stack([np.full(segments, top_centre),
                               segments + i, segments + j], axis=1))
    return TriangleMesh(np.vstack(vertices), np.vstack(faces))
