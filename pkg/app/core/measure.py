"""
Topology diagnostics and measurements on triangle meshes.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse import csgraph
from scipy.spatial import cKDTree

from core.exceptions import NotWatertightError, OrientationError
from core.mesh import TriangleMesh, weld

logger = logging.getLogger(__name__)

MM3_PER_CM3 = 1000.0


@dataclass(frozen=True)
class MeshDiagnostics:
    """Counts and topology flags of a welded mesh."""
    vertex_count: int
    triangle_count: int
    edge_count: int
    boundary_edge_count: int
    non_manifold_edge_count: int
    connected_components: int
    is_watertight: bool
    is_orientable: bool
    is_consistently_oriented: bool
    bounding_box: tuple

    @property
    def euler_characteristic(self):
        return self.vertex_count - self.edge_count + self.triangle_count

    def as_dict(self):
        low, high = self.bounding_box
        return {
            'vertex_count': self.vertex_count,
            'triangle_count': self.triangle_count,
            'edge_count': self.edge_count,
            'boundary_edge_count': self.boundary_edge_count,
            'non_manifold_edge_count': self.non_manifold_edge_count,
            'connected_components': self.connected_components,
            'is_watertight': self.is_watertight,
            'is_orientable': self.is_orientable,
            'is_consistently_oriented': self.is_consistently_oriented,
            'euler_characteristic': self.euler_characteristic,
            'bounding_box': [list(map(float, low)), list(map(float, high))],
        }


class _EdgeTable:
    """Undirected edges of a mesh with their incident half-edges."""

    def __init__(self, mesh):
        half = mesh.edges()
        self.half = half
        self.face = np.tile(np.arange(mesh.triangle_count), 3)
        key = np.sort(half, axis=1)
        if len(key):
            self.unique, self.inverse, self.counts = np.unique(
                key, axis=0, return_inverse=True, return_counts=True)
            self.inverse = self.inverse.reshape(-1)
        else:
            self.unique = np.zeros((0, 2), dtype=np.int64)
            self.inverse = np.zeros(0, dtype=np.int64)
            self.counts = np.zeros(0, dtype=np.int64)

    def manifold_pairs(self):
        """Triangle pairs sharing a two-sided edge, and whether they agree."""
        two = np.flatnonzero(self.counts == 2)
        if len(two) == 0:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros(0, dtype=bool)
        mask = np.isin(self.inverse, two)
        half_ids = np.flatnonzero(mask)
        order = np.argsort(self.inverse[half_ids], kind='stable')
        half_ids = half_ids[order].reshape(-1, 2)
        first, second = half_ids[:, 0], half_ids[:, 1]
        # Consistent windings traverse the shared edge in opposite order.
        agree = self.half[first, 0] != self.half[second, 0]
        return self.face[first], self.face[second], agree


def _orientation_parity(mesh, table=None):
    """
    Two-colour the triangle adjacency graph by winding flips.

    Returns (parity, orientable, components) where flipping every triangle
    with parity 1 makes each component consistently oriented when the mesh
    is orientable.
    """
    table = table or _EdgeTable(mesh)
    m = mesh.triangle_count
    a, b, agree = table.manifold_pairs()
    weights = np.where(agree, 1, 2)
    graph = coo_matrix((np.concatenate([weights, weights]),
                        (np.concatenate([a, b]), np.concatenate([b, a]))),
                       shape=(m, m)).tocsr()
    _, labels = csgraph.connected_components(graph, directed=False)
    _, roots = np.unique(labels, return_index=True)
    parity = np.zeros(m, dtype=np.int8)
    for root in roots:
        order, predecessors = csgraph.breadth_first_order(
            graph, int(root), directed=False, return_predecessors=True)
        children = order[1:]
        if len(children) == 0:
            continue
        parents = predecessors[children]
        flips = (np.asarray(graph[children, parents]).ravel() == 2)
        for node, parent, flip in zip(children.tolist(), parents.tolist(),
                                      flips.tolist()):
            parity[node] = parity[parent] ^ flip
    if len(a):
        expected = np.where(agree, 0, 1)
        orientable = bool(np.all((parity[a] ^ parity[b]) == expected))
    else:
        orientable = True
    return parity, orientable, labels


def diagnose(mesh, weld_tolerance=None):
    """Report counts and topology of mesh after welding."""
    welded = weld(mesh, weld_tolerance)
    table = _EdgeTable(welded)
    boundary = int(np.sum(table.counts == 1))
    non_manifold = int(np.sum(table.counts > 2))

    _, orientable, _ = _orientation_parity(welded, table)
    directed = np.unique(table.half, axis=0) if len(table.half) else []
    consistent = len(directed) == len(table.half)

    if welded.vertex_count and len(table.unique):
        graph = coo_matrix((np.ones(len(table.unique)),
                            (table.unique[:, 0], table.unique[:, 1])),
                           shape=(welded.vertex_count,) * 2)
        referenced = np.unique(welded.triangles)
        _, labels = csgraph.connected_components(graph, directed=False)
        components = len(np.unique(labels[referenced]))
    else:
        components = 0

    low, high = welded.bounds
    return MeshDiagnostics(
        vertex_count=welded.vertex_count,
        triangle_count=welded.triangle_count,
        edge_count=len(table.unique),
        boundary_edge_count=boundary,
        non_manifold_edge_count=non_manifold,
        connected_components=components,
        is_watertight=(welded.triangle_count > 0 and boundary == 0
                       and non_manifold == 0),
        is_orientable=orientable and non_manifold == 0,
        is_consistently_oriented=consistent and non_manifold == 0,
        bounding_box=(tuple(map(float, low)), tuple(map(float, high))),
    )


def signed_volume_mm3(mesh):
    """Divergence-theorem volume in mm³, sign following the winding."""
    if mesh.is_empty:
        return 0.0
    # Centring keeps the sum translation invariant in floating point.
    origin = mesh.vertices.mean(axis=0)
    corners = mesh.corners - origin
    triple = np.einsum('ij,ij->i', corners[:, 0],
                       np.cross(corners[:, 1], corners[:, 2]))
    return math.fsum(triple) / 6.0


def enclosed_volume(mesh, weld_tolerance=None):
    """Volume in cm³ enclosed by a watertight, consistently oriented mesh."""
    welded = weld(mesh, weld_tolerance)
    diagnostics = diagnose(welded, 0.0)
    if not diagnostics.is_watertight:
        raise NotWatertightError(diagnostics)
    if not diagnostics.is_consistently_oriented:
        raise OrientationError(diagnostics)
    return abs(signed_volume_mm3(welded)) / MM3_PER_CM3


def surface_area(mesh):
    """Total triangle area in mm²."""
    return math.fsum(mesh.face_areas)


def triangle_components(mesh):
    """Label triangles by edge-connected component."""
    table = _EdgeTable(mesh)
    m = mesh.triangle_count
    if m == 0:
        return 0, np.zeros(0, dtype=np.int64)
    # Join triangles through any shared vertex-pair edge.
    order = np.argsort(table.inverse, kind='stable')
    sorted_edges = table.inverse[order]
    faces = table.face[order]
    same = sorted_edges[1:] == sorted_edges[:-1]
    graph = coo_matrix((np.ones(int(same.sum())),
                        (faces[:-1][same], faces[1:][same])), shape=(m, m))
    return csgraph.connected_components(graph, directed=False)


def connected_components(mesh):
    """Split a mesh into its edge-connected pieces, largest first."""
    count, labels = triangle_components(mesh)
    pieces = [mesh.submesh(labels == label) for label in range(count)]
    pieces.sort(key=lambda piece: -piece.triangle_count)
    return pieces


def largest_component(mesh):
    """Return the component with the most triangles."""
    if mesh.is_empty:
        return mesh
    return connected_components(mesh)[0]


def hausdorff_distance(first, second):
    """Symmetric Hausdorff distance between the vertex sets."""
    forward, _ = cKDTree(second.vertices).query(first.vertices)
    backward, _ = cKDTree(first.vertices).query(second.vertices)
    return float(max(forward.max(initial=0.0), backward.max(initial=0.0)))


def _unit(direction):
    direction = np.asarray(direction, dtype=np.float64)
    length = np.linalg.norm(direction)
    if length == 0:
        raise ValueError('Axis direction must be non-zero')
    return direction / length


def radial_alignment(mesh, direction=(0.0, 0.0, 1.0)):
    """
    Cosine between each face normal and the outward radial direction.

    The axis passes through the origin along direction. Faces centred on
    the axis score 0.
    """
    axis = _unit(direction)
    centroids = mesh.face_centroids
    radial = centroids - np.outer(centroids @ axis, axis)
    lengths = np.linalg.norm(radial, axis=1)
    safe = np.where(lengths > 0, lengths, 1.0)
    cosine = np.einsum('ij,ij->i', mesh.face_normals, radial) / safe
    return np.where(lengths > 0, cosine, 0.0)


def sample_surface(mesh, spacing, max_subdivisions=16):
    """
    Deterministic surface samples on a barycentric lattice per triangle.

    Returns (points, triangle_ids).
    """
    corners = mesh.corners
    if len(corners) == 0:
        return np.zeros((0, 3)), np.zeros(0, dtype=np.int64)
    longest = np.max(np.linalg.norm(
        corners - np.roll(corners, 1, axis=1), axis=2), axis=1)
    levels = np.clip(np.ceil(longest / spacing), 1,
                     max_subdivisions).astype(np.int64)
    points, owners = [mesh.vertices], [None]
    for level in np.unique(levels):
        ids = np.flatnonzero(levels == level)
        i, j = np.meshgrid(np.arange(level + 1), np.arange(level + 1),
                           indexing='ij')
        inside = (i + j) <= level
        weights = np.stack([i[inside], j[inside]], axis=1) / level
        weights = np.column_stack([1.0 - weights.sum(axis=1), weights])
        # Skip the pure corners; they are the vertices already listed.
        weights = weights[np.max(weights, axis=1) < 1.0]
        if len(weights) == 0:
            continue
        chosen = np.einsum('kc,tcd->tkd', weights, corners[ids])
        points.append(chosen.reshape(-1, 3))
        owners.append(np.repeat(ids, len(weights)))
    vertex_owner = np.zeros(mesh.vertex_count, dtype=np.int64)
    vertex_owner[mesh.triangles[:, 0]] = np.arange(mesh.triangle_count)
    owners[0] = vertex_owner
    return np.vstack(points), np.concatenate(owners)


def ray_hits(origins, directions, mesh, epsilon=1e-12):
    """
    Count forward ray crossings with mesh triangles (Moller-Trumbore).

    Returns an integer array with one count per ray.
    """
    corners = mesh.corners
    v0 = corners[:, 0]
    e1 = corners[:, 1] - v0
    e2 = corners[:, 2] - v0
    counts = np.zeros(len(origins), dtype=np.int64)
    for index, (origin, direction) in enumerate(zip(origins, directions)):
        p = np.cross(direction, e2)
        det = np.einsum('ij,ij->i', e1, p)
        valid = np.abs(det) > epsilon
        inv = np.zeros_like(det)
        inv[valid] = 1.0 / det[valid]
        s = origin - v0
        u = np.einsum('ij,ij->i', s, p) * inv
        q = np.cross(s, e1)
        v = (q @ direction) * inv
        t = np.einsum('ij,ij->i', e2, q) * inv
        hit = valid & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > epsilon)
        counts[index] = int(hit.sum())
    return counts


def orient_fix(mesh, samples_per_component=9):
    """
    Make windings consistent per component and point them outward.

    Each component is first made internally consistent, then flipped when
    the majority of rays cast along its triangle normals cross the
    whole mesh an odd number of times (the normal points into material).
    """
    welded = weld(mesh, 0.0)
    parity, orientable, labels = _orientation_parity(welded)
    if not orientable:
        raise OrientationError(message='Mesh is not orientable')
    triangles = welded.triangles.copy()
    flip = parity == 1
    triangles[flip] = triangles[flip][:, ::-1]
    fixed = TriangleMesh(welded.vertices, triangles)

    normals = fixed.face_normals
    centroids = fixed.face_centroids
    areas = fixed.face_areas
    scale = max(fixed.diagonal, 1e-12)
    # A slight fixed tilt keeps the rays off shared edges and vertices.
    directions = normals + 0.01 * np.array([0.5773, 0.3141, 0.7071])
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    for component in np.unique(labels):
        ids = np.flatnonzero(labels == component)
        ids = ids[np.argsort(-areas[ids], kind='stable')]
        picked = ids[:samples_per_component]
        origins = centroids[picked] + normals[picked] * scale * 1e-7
        hits = ray_hits(origins, directions[picked], fixed)
        if np.sum(hits % 2 == 1) * 2 > len(picked):
            triangles[ids] = triangles[ids][:, ::-1]
            logger.debug('Flipped component %d (%d triangles)', component,
                         len(ids))
    return TriangleMesh(welded.vertices, triangles)
