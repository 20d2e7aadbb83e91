"""
Marching-cubes extraction of grid isosurfaces.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from skimage import measure

from core.mesh import TriangleMesh

logger = logging.getLogger(__name__)

INSIDE = ('below', 'above')


@dataclass(frozen=True, eq=False)
class Isosurface:
    """An extracted surface and whether the grid faces cut it open."""
    mesh: TriangleMesh
    iso_value: float
    touches_boundary: bool

    def as_dict(self):
        return {
            'iso_value': float(self.iso_value),
            'touches_boundary': self.touches_boundary,
            'triangle_count': self.mesh.triangle_count,
        }


def _inside_mask(values, iso, inside):
    return values < iso if inside == 'below' else values > iso


def touches_boundary(grid, iso, inside='below'):
    """True when the inside region reaches the outer faces of the grid."""
    if inside not in INSIDE:
        raise ValueError(f'inside must be one of {INSIDE}')
    return bool(np.any(_inside_mask(grid.boundary_values(), iso, inside)))


def _outward_sign(grid, mesh, inside):
    """+1 if face normals already point out of the inside region."""
    values = np.asarray(grid.values, dtype=np.float64)
    gradient = np.gradient(values, grid.spacing)
    index = grid.to_index(mesh.face_centroids).T
    sampled = np.column_stack([
        ndimage.map_coordinates(component, index, order=1, mode='nearest')
        for component in gradient
    ])
    agreement = np.einsum('ij,ij->i', sampled, mesh.face_normals)
    if inside == 'above':
        agreement = -agreement
    return 1 if np.sum(agreement > 0) >= np.sum(agreement < 0) else -1


def extract_isosurface(grid, iso_value, inside='below'):
    """
    Triangulate the level set grid == iso_value.

    inside='below' treats values under the level as inside (signed
    distances, Poisson indicator); 'above' suits occupancy grids. Triangles
    wind outward, away from the inside region. A level that never crosses
    the grid yields an empty mesh. The result carries the mesh and the
    touches_boundary flag.
    """
    if inside not in INSIDE:
        raise ValueError(f'inside must be one of {INSIDE}')
    values = np.asarray(grid.values, dtype=np.float64)
    if min(values.shape) < 2 or not (
            values.min() < iso_value < values.max()):
        return Isosurface(TriangleMesh.empty(), iso_value, False)

    clipped = touches_boundary(grid, iso_value, inside)
    if clipped:
        logger.warning('Isosurface at %.6g touches the grid boundary; the '
                       'mesh will have open edges there', iso_value)

    vertices, faces, _, _ = measure.marching_cubes(
        values, level=iso_value, spacing=(grid.spacing,) * 3,
        allow_degenerate=False)
    faces = faces[(faces[:, 0] != faces[:, 1])
                  & (faces[:, 1] != faces[:, 2])
                  & (faces[:, 0] != faces[:, 2])]
    mesh = TriangleMesh(vertices + grid.origin, faces)
    if _outward_sign(grid, mesh, inside) < 0:
        mesh = mesh.flipped()
    logger.debug('Extracted %d triangles at iso %.6g', mesh.triangle_count,
                 iso_value)
    return Isosurface(mesh, iso_value, clipped)
