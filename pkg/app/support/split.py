"""
Planar splitting of print parts to fit a printer build volume.
"""

import logging
import math

import numpy as np
import shapely
from scipy.spatial import cKDTree
from shapely.geometry import LineString, Polygon
from shapely.ops import linemerge

from core.conf import or_setting
from core.exceptions import (
    EmptyResultError, InfeasibleSplitError, NotWatertightError,
    SplitVolumeError,
)
from core.measure import diagnose, enclosed_volume
from core.mesh import TriangleMesh, weld

logger = logging.getLogger(__name__)

AXES = 'xyz'
SEAM_AXES = ('auto', 'x', 'y', 'z')
# Preferred seam axes, best first.
PREFERENCE = ('z', 'y', 'x')


def _clear_plane(coords, value, extent):
    """Nudge a cut value until no vertex lies on the plane."""
    step = max(extent, 1.0) * 1e-6
    for _ in range(100):
        if not np.any(np.abs(coords - value) <= step * 1e-3):
            return value
        value += step
    return value


def _edge_points(vertices, distances, edges):
    """Plane crossings on vertex-index edges, identical for both owners."""
    if len(edges) == 0:
        return np.zeros((0, 3)), np.zeros(0, dtype=np.int64)
    edges = np.sort(edges, axis=1)
    unique, inverse = np.unique(edges, axis=0, return_inverse=True)
    a, b = unique[:, 0], unique[:, 1]
    t = distances[a] / (distances[a] - distances[b])
    points = vertices[a] + (vertices[b] - vertices[a]) * t[:, None]
    return points, inverse.reshape(-1)


def _cap(vertices, segments, axis, outward):
    """
    Triangulate the cross-section bounded by segments on the cut plane.

    segments are vertex-index pairs. Returns triangles over the same
    vertices, wound so their normals point along outward.
    """
    if len(segments) == 0:
        return np.zeros((0, 3), dtype=np.int64)
    plane = [a for a in range(3) if a != axis]
    flat = vertices[:, plane]
    lines = [LineString(flat[pair]) for pair in segments]
    merged = linemerge(lines)
    rings = list(getattr(merged, 'geoms', [merged]))
    section = Polygon()
    for ring in rings:
        if ring.is_ring:
            section = section.symmetric_difference(Polygon(ring.coords))
        else:
            logger.warning('Open cut outline with %d points skipped',
                           len(ring.coords))
    if section.is_empty:
        return np.zeros((0, 3), dtype=np.int64)

    triangles = shapely.get_parts(shapely.constrained_delaunay_triangles(
        section))
    triangles = [
        tri for tri in triangles
        if tri.area > 0 and section.covers(tri.representative_point())
    ]
    used = np.unique(segments)
    tree = cKDTree(flat[used])
    faces = []
    for tri in triangles:
        corners = np.asarray(tri.exterior.coords)[:3]
        _, nearest = tree.query(corners)
        faces.append(used[nearest])
    faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
    normals = np.cross(vertices[faces[:, 1]] - vertices[faces[:, 0]],
                       vertices[faces[:, 2]] - vertices[faces[:, 0]])
    flip = normals[:, axis] * outward < 0
    faces[flip] = faces[flip][:, ::-1]
    return faces


def cut(mesh, axis, value):
    """
    Cut a closed mesh with the plane coordinate[axis] == value.

    Returns (below, above), each closed with a flat cap. Either side may be
    empty when the plane misses the mesh.
    """
    vertices = mesh.vertices
    low, high = mesh.bounds
    value = _clear_plane(vertices[:, axis], value, high[axis] - low[axis])
    distances = vertices[:, axis] - value
    above = distances > 0
    triangles = mesh.triangles
    side = above[triangles]
    count = side.sum(axis=1)
    whole_above = triangles[count == 3]
    whole_below = triangles[count == 0]

    mixed = triangles[(count == 1) | (count == 2)]
    mixed_side = above[mixed]
    # Rotate each mixed triangle so its lone corner comes first.
    lone = np.where(mixed_side.sum(axis=1) == 1,
                    np.argmax(mixed_side, axis=1),
                    np.argmin(mixed_side, axis=1))
    order = (lone[:, None] + np.arange(3)) % 3
    mixed = np.take_along_axis(mixed, order, axis=1)
    a, b, c = mixed[:, 0], mixed[:, 1], mixed[:, 2]
    points, inverse = _edge_points(
        vertices, distances, np.concatenate([np.column_stack([a, b]),
                                             np.column_stack([a, c])]))
    n = len(vertices)
    p = n + inverse[:len(mixed)]
    q = n + inverse[len(mixed):]
    all_vertices = np.vstack([vertices, points])

    lone_side = np.column_stack([a, p, q])
    other_side = [np.column_stack([p, b, c]), np.column_stack([p, c, q])]
    lone_above = above[a]
    pieces = {
        True: [whole_above],
        False: [whole_below],
    }
    segments = {True: [], False: []}
    for flag in (True, False):
        here = lone_above == flag
        pieces[flag].append(lone_side[here])
        # The lone side's cut edge runs p -> q; its cap needs q -> p.
        segments[flag].append(np.column_stack([q[here], p[here]]))
        rest = lone_above != flag
        pieces[flag].extend(tri[rest] for tri in other_side)
        segments[flag].append(np.column_stack([p[rest], q[rest]]))

    result = []
    for flag, outward in ((False, 1.0), (True, -1.0)):
        body = np.vstack(pieces[flag])
        if len(body) == 0:
            result.append(TriangleMesh.empty())
            continue
        cap = _cap(all_vertices, np.vstack(segments[flag]), axis, outward)
        side_mesh = TriangleMesh(all_vertices, np.vstack([body, cap]))
        result.append(weld(side_mesh, 0.0))
    return tuple(result)


def _fits(extents, limits):
    return [AXES[i] for i in range(3) if extents[i] > limits[i] + 1e-9]


def plan_split(extents, limits, seam_axis='auto'):
    """
    Choose the seam axis and part count for a bounding box.

    Returns (axis index, parts). Raises InfeasibleSplitError when the
    cross-section does not fit whatever the seam axis.
    """
    if seam_axis not in SEAM_AXES:
        raise ValueError(f'seam_axis must be one of {SEAM_AXES}')
    if not _fits(extents, limits):
        return AXES.index('z'), 1
    candidates = PREFERENCE if seam_axis == 'auto' else (seam_axis,)
    options = []
    for name in candidates:
        axis = AXES.index(name)
        violating = [v for v in _fits(extents, limits) if v != name]
        if violating:
            options.append((None, axis, violating))
            continue
        parts = math.ceil(extents[axis] / limits[axis] - 1e-9)
        options.append((parts, axis, []))
    feasible = [option for option in options if option[0] is not None]
    if not feasible:
        _, axis, violating = options[0]
        indices = [AXES.index(v) for v in violating]
        raise InfeasibleSplitError(
            violating, [extents[i] for i in indices],
            [limits[i] for i in indices])
    parts, axis, _ = min(feasible, key=lambda option: option[0])
    return axis, parts


def split_for_build(mesh, build_volume=None, seam_axis='auto', margin=None,
                    volume_tolerance=None):
    """
    Cut a closed mesh into parts that each fit the build volume.

    Each part's extent must stay margin mm under the build dimension. Cuts
    are evenly spaced planes across the fewest parts; parts come back
    ordered along the seam axis, each capped watertight. The parts must
    hold the volume of the mesh within volume_tolerance (a fraction).
    """
    build = np.asarray(or_setting(build_volume, 'BUILD_VOLUME_MM'),
                       dtype=np.float64)
    margin = or_setting(margin, 'BUILD_MARGIN_MM')
    limits = build - margin
    if build.shape != (3,) or np.any(limits <= 0):
        raise ValueError('build volume must exceed the margin on every axis')
    diagnostics = diagnose(mesh)
    if not diagnostics.is_watertight:
        raise NotWatertightError(diagnostics)

    low, high = mesh.bounds
    extents = high - low
    axis, parts = plan_split(extents, limits, seam_axis)
    if parts == 1:
        logger.info('Mesh fits the build volume; no split needed')
        return [mesh]

    pieces = []
    remainder = weld(mesh)
    for i in range(1, parts):
        value = low[axis] + extents[axis] * i / parts
        below, remainder = cut(remainder, axis, value)
        if below.is_empty:
            raise EmptyResultError(f'Cut at {AXES[axis]}={value:.3f} left '
                                   'an empty part')
        pieces.append(below)
    if remainder.is_empty:
        raise EmptyResultError('Last part is empty')
    pieces.append(remainder)

    original = enclosed_volume(mesh)
    total = sum(enclosed_volume(piece) for piece in pieces)
    logger.info('Split along %s into %d parts; volume %.3f -> %.3f cm3',
                AXES[axis], parts, original, total)
    tolerance = or_setting(volume_tolerance, 'SPLIT_VOLUME_TOLERANCE')
    if abs(total - original) > tolerance * original:
        raise SplitVolumeError(original, total, tolerance)
    return pieces
