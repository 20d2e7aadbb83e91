"""
Surfaces of revolution and the volumes derived from a skeleton.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.conf import or_setting
from core.hull import convex_hull
from core.measure import MM3_PER_CM3, enclosed_volume
from core.mesh import TriangleMesh
from skeleton.circles import plane_basis

logger = logging.getLogger(__name__)

MIN_SEGMENTS = 8
AXIS_TOLERANCE_MM = 1e-12


def axis_frame(axis_point, axis_direction):
    """Return (origin, 3x3 matrix) mapping local (x, y, z) to world."""
    direction = np.asarray(axis_direction, dtype=np.float64)
    direction = direction / np.linalg.norm(direction)
    u, v = plane_basis(direction)
    return np.asarray(axis_point, dtype=np.float64), np.column_stack(
        [u, v, direction])


def lathe(profile, segments, axis_point=(0.0, 0.0, 0.0),
          axis_direction=(0.0, 0.0, 1.0)):
    """
    Revolve a polyline of (radius, height) points about an axis.

    The profile is walked counter-clockwise in the (radius, height)
    half-plane so the solid lies on its left; points with zero radius
    become single apex vertices. A profile that starts and ends on the axis
    gives a closed, outward-oriented surface.
    """
    if segments < 3:
        raise ValueError("lathe needs at least 3 segments")
    profile = np.asarray(profile, dtype=np.float64).reshape(-1, 2)
    if len(profile) < 2:
        raise ValueError("A profile needs at least 2 points")
    if np.any(profile[:, 0] < 0):
        raise ValueError("Profile radii must be non-negative")

    angles = 2.0 * np.pi * np.arange(segments) / segments
    cos, sin = np.cos(angles), np.sin(angles)
    vertices, slots = [], []
    count = 0
    for radius, height in profile:
        if radius <= AXIS_TOLERANCE_MM:
            vertices.append([[0.0, 0.0, height]])
            slots.append(np.full(segments, count))
            count += 1
        else:
            vertices.append(np.column_stack([radius * cos, radius * sin,
                                             np.full(segments, height)]))
            slots.append(count + np.arange(segments))
            count += segments

    j = np.arange(segments)
    k = (j + 1) % segments
    faces = []
    for index in range(len(profile) - 1):
        a, b = slots[index], slots[index + 1]
        apex_a = profile[index, 0] <= AXIS_TOLERANCE_MM
        apex_b = profile[index + 1, 0] <= AXIS_TOLERANCE_MM
        if (apex_a and apex_b) or np.allclose(profile[index],
                                              profile[index + 1]):
            continue
        if not apex_a:
            faces.append(np.column_stack([a[j], a[k], b[k]]))
        if not apex_b:
            faces.append(np.column_stack([a[j], b[k], b[j]]))

    local = np.vstack(vertices)
    origin, frame = axis_frame(axis_point, axis_direction)
    triangles = (np.vstack(faces) if faces
                 else np.zeros((0, 3), dtype=np.int64))
    return TriangleMesh(origin + local @ frame.T, triangles)


def skeleton_profile(skeleton):
    """Closed (radius, height) outline of the solid a skeleton bounds."""
    rings = [(r, h) for h, r in skeleton.rings]
    first, last = skeleton.rings[0][0], skeleton.rings[-1][0]
    return [(0.0, first)] + rings + [(0.0, last)]


def revolve(skeleton, segments=None):
    """Watertight surface of revolution through every skeleton ring."""
    segments = or_setting(segments, 'SEGMENTS')
    if segments < MIN_SEGMENTS:
        raise ValueError(f"revolve needs at least {MIN_SEGMENTS} segments")
    mesh = lathe(skeleton_profile(skeleton), segments, skeleton.axis_point,
                 skeleton.axis_direction)
    logger.debug('Revolved %d rings into %d triangles', len(skeleton.rings),
                 mesh.triangle_count)
    return mesh


def ring_points(skeleton, segments):
    """Sample every ring at segments angular steps in world coordinates."""
    origin, frame = axis_frame(skeleton.axis_point, skeleton.axis_direction)
    angles = 2.0 * np.pi * np.arange(segments) / segments
    points = [
        np.column_stack([r * np.cos(angles), r * np.sin(angles),
                         np.full(segments, h)])
        for h, r in skeleton.rings
    ]
    return origin + np.vstack(points) @ frame.T


def skeleton_hull_volume(skeleton, segments=None):
    """Convex hull of the sampled rings and its volume in cm³."""
    segments = or_setting(segments, 'SEGMENTS')
    hull = convex_hull(ring_points(skeleton, segments))
    return hull, enclosed_volume(hull)


def analytic_volume(skeleton):
    """Exact volume in cm³ for radii linear in height between rings."""
    total = math.fsum(
        math.pi * (h1 - h0) * (r0 * r0 + r0 * r1 + r1 * r1) / 3.0
        for (h0, r0), (h1, r1) in zip(skeleton.rings, skeleton.rings[1:])
    )
    return total / MM3_PER_CM3


@dataclass(frozen=True)
class VolumeComparison:
    hull_cm3: float
    revolve_cm3: float
    analytic_cm3: float

    @property
    def hull_overestimate_pct(self):
        """Relative gap of the hull volume over the revolve volume."""
        return 100.0 * (self.hull_cm3 - self.revolve_cm3) / self.revolve_cm3

    def as_dict(self):
        return {
            'hull_volume_cm3': self.hull_cm3,
            'revolve_volume_cm3': self.revolve_cm3,
            'analytic_volume_cm3': self.analytic_cm3,
            'hull_overestimate_pct': self.hull_overestimate_pct,
        }


def compare_volumes(skeleton, segments=None):
    """Hull, revolve and analytic volumes of one skeleton."""
    _, hull_cm3 = skeleton_hull_volume(skeleton, segments)
    revolve_cm3 = enclosed_volume(revolve(skeleton, segments))
    comparison = VolumeComparison(hull_cm3, revolve_cm3,
                                  analytic_volume(skeleton))
    if comparison.hull_overestimate_pct > 0.5:
        logger.info('Convex hull overestimates the revolved volume by '
                    '%.2f%%', comparison.hull_overestimate_pct)
    return comparison
