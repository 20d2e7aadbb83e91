"""
Vessel reconstruction from posed fragments.
"""

import logging
from dataclasses import dataclass

import numpy as np

from core.conf import or_setting
from core.measure import enclosed_volume, largest_component, radial_alignment
from implicit.isosurface import extract_isosurface
from implicit.normals import estimate_normals
from implicit.poisson import PoissonSolution, poisson_reconstruct

logger = logging.getLogger(__name__)

SHEETS = ('all', 'outer', 'inner')


@dataclass(frozen=True, eq=False)
class Reconstruction:
    mesh: object
    volume_cm3: float
    solution: PoissonSolution
    point_count: int
    touches_boundary: bool = False

    def as_dict(self):
        return {
            'volume_cm3': self.volume_cm3,
            'point_count': self.point_count,
            'triangle_count': self.mesh.triangle_count,
            'vertex_count': self.mesh.vertex_count,
            'touches_boundary': self.touches_boundary,
            **self.solution.as_dict(),
        }


def pooled_points(fragments, sheet='all', axis=(0.0, 0.0, 1.0),
                  min_alignment=None):
    """
    Distinct vertices of the fragments.

    With sheet='outer' or 'inner' only vertices of triangles facing away
    from (towards) the vessel axis are kept.
    """
    if sheet not in SHEETS:
        raise ValueError(f'sheet must be one of {SHEETS}')
    min_alignment = or_setting(min_alignment, 'BAND_SPLIT_MIN_ALIGNMENT')
    chunks = []
    for fragment in fragments:
        if sheet == 'all':
            chunks.append(fragment.vertices)
            continue
        alignment = radial_alignment(fragment, axis)
        if sheet == 'outer':
            keep = alignment >= min_alignment
        else:
            keep = alignment <= -min_alignment
        chunks.append(fragment.vertices[np.unique(fragment.triangles[keep])])
    if not chunks:
        return np.zeros((0, 3))
    return np.unique(np.vstack(chunks), axis=0)


def reconstruct_vessel(fragments, grid=None, padding=None, k=None,
                       sheet='all', axis=(0.0, 0.0, 1.0)):
    """
    Pool fragment points and rebuild one closed vessel surface.

    Fragments must already be scaled and posed in vessel coordinates with
    the vessel axis through the origin along axis. The largest component of
    the Poisson isosurface is kept and its enclosed volume measured.
    """
    fragments = list(fragments)
    if not fragments:
        raise ValueError('reconstruct_vessel needs at least one fragment')
    points = pooled_points(fragments, sheet, axis)
    logger.info('Reconstructing %s sheet from %d fragments, %d points',
                sheet, len(fragments), len(points))
    cloud = estimate_normals(points, k)
    solution = poisson_reconstruct(cloud, grid, padding)
    surface = extract_isosurface(solution.grid, solution.iso_value)
    mesh = largest_component(surface.mesh)
    volume = enclosed_volume(mesh)
    logger.info('Reconstructed volume %.3f cm³', volume)
    return Reconstruction(mesh, volume, solution, len(points),
                          surface.touches_boundary)
