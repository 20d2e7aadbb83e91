"""
Parametric double-walled vessels with analytic volumes.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.conf import or_setting
from core.measure import MM3_PER_CM3
from core.mesh import TriangleMesh
from skeleton.revolution import MIN_SEGMENTS, lathe

logger = logging.getLogger(__name__)


def _frustums(heights, radii):
    """pi * integral of r(z)^2 for r linear between rows, in mm³."""
    return math.fsum(
        math.pi * (h1 - h0) * (r0 * r0 + r0 * r1 + r1 * r1) / 3.0
        for h0, h1, r0, r1 in zip(heights, heights[1:], radii, radii[1:])
    )


@dataclass(frozen=True)
class VesselProfile:
    """
    Control rows of (height, outer radius, wall thickness) in mm.

    The base is as thick as the wall of the lowest row; the inner surface
    is the outer one moved inwards by the interpolated thickness.
    """
    control: tuple
    segments: int = None

    def __post_init__(self):
        rows = tuple(tuple(float(x) for x in row) for row in self.control)
        if len(rows) < 2:
            raise ValueError('A vessel profile needs at least two rows')
        if any(len(row) != 3 for row in rows):
            raise ValueError('Profile rows are (height, radius, thickness)')
        heights = [row[0] for row in rows]
        if any(b <= a for a, b in zip(heights, heights[1:])):
            raise ValueError('Profile heights must be strictly increasing')
        for height, radius, thickness in rows:
            if not thickness > 0:
                raise ValueError(f'Wall thickness must be positive at '
                                 f'{height} mm')
            if not radius > thickness:
                raise ValueError(f'Inner radius is not positive at '
                                 f'{height} mm')
        if heights[0] + rows[0][2] >= heights[-1]:
            raise ValueError('The base is thicker than the vessel is tall')
        segments = or_setting(self.segments, 'SEGMENTS')
        if segments < MIN_SEGMENTS:
            raise ValueError(f'A vessel needs at least {MIN_SEGMENTS} '
                             'segments')
        object.__setattr__(self, 'control', rows)
        object.__setattr__(self, 'segments', int(segments))

    @property
    def heights(self):
        return np.array([row[0] for row in self.control])

    @property
    def outer_radii(self):
        return np.array([row[1] for row in self.control])

    @property
    def inner_radii(self):
        return np.array([row[1] - row[2] for row in self.control])

    @property
    def floor_height(self):
        return self.control[0][0] + self.control[0][2]

    def cavity_rows(self):
        """(height, inner radius) from the floor to the rim."""
        heights, radii = self.heights, self.inner_radii
        floor = self.floor_height
        above = heights > floor
        floor_radius = float(np.interp(floor, heights, radii))
        return ([(floor, floor_radius)]
                + list(zip(heights[above], radii[above])))

    def outline(self):
        """Closed (radius, height) outline of the wall, counter-clockwise."""
        bottom = self.control[0][0]
        outer = [(r, h) for h, r in zip(self.heights, self.outer_radii)]
        inner = [(r, h) for h, r in reversed(self.cavity_rows())]
        return [(0.0, bottom)] + outer + inner + [(0.0, self.floor_height)]

    def as_dict(self):
        return {'control': [list(row) for row in self.control],
                'segments': self.segments}


@dataclass(frozen=True, eq=False)
class GeneratedVessel:
    """
    A vessel mesh with its analytic volumes in cm³.

    enclosed_cm3 is the capacity bounded by the inner surface and the rim
    plane, wall_cm3 the ceramic itself, envelope_cm3 their sum.
    """
    mesh: TriangleMesh
    cavity_mesh: TriangleMesh
    enclosed_cm3: float
    wall_cm3: float
    envelope_cm3: float
    profile: VesselProfile

    def as_dict(self):
        return {
            'enclosed_volume_cm3': self.enclosed_cm3,
            'wall_volume_cm3': self.wall_cm3,
            'envelope_volume_cm3': self.envelope_cm3,
            'profile': self.profile.as_dict(),
        }


def generate_vessel(profile):
    """Build the watertight wall of a profile and its cavity."""
    mesh = lathe(profile.outline(), profile.segments)
    cavity_rows = profile.cavity_rows()
    cavity_outline = ([(0.0, cavity_rows[0][0])]
                      + [(r, h) for h, r in cavity_rows]
                      + [(0.0, cavity_rows[-1][0])])
    cavity = lathe(cavity_outline, profile.segments)

    envelope = _frustums(profile.heights, profile.outer_radii)
    heights, radii = zip(*cavity_rows)
    enclosed = _frustums(heights, radii)
    logger.debug('Generated vessel: %d triangles, capacity %.3f cm³',
                 mesh.triangle_count, enclosed / MM3_PER_CM3)
    return GeneratedVessel(mesh, cavity, enclosed / MM3_PER_CM3,
                           (envelope - enclosed) / MM3_PER_CM3,
                           envelope / MM3_PER_CM3, profile)
