"""
Display supports: a shelled copy of the vessel with room for the sherds.
"""

import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from core.conf import or_setting
from core.exceptions import EmptyResultError, FragmentProtrusionError
from core.measure import diagnose, enclosed_volume, sample_surface
from support.engrave import engrave_label
from support.voxels import VoxelSolid, voxelize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SupportSpec:
    """
    Parameters of a display support. Lengths are millimetres.

    None picks the SUPPORT_* and BUILD_VOLUME_MM settings.
    """
    shell_thickness: float = None
    clearance: float = None
    voxel_size: float = None
    build_volume: tuple = None
    label_text: str = ''
    label_depth: float = None
    label_region: tuple = None

    def __post_init__(self):
        defaults = {
            'shell_thickness': 'SUPPORT_SHELL_MM',
            'clearance': 'SUPPORT_CLEARANCE_MM',
            'voxel_size': 'SUPPORT_VOXEL_MM',
            'build_volume': 'BUILD_VOLUME_MM',
            'label_depth': 'SUPPORT_LABEL_DEPTH_MM',
        }
        for name, setting_name in defaults.items():
            object.__setattr__(
                self, name, or_setting(getattr(self, name), setting_name))
        object.__setattr__(self, 'build_volume',
                           tuple(float(v) for v in self.build_volume))

        if not self.shell_thickness > 0:
            raise ValueError('shell_thickness must be positive')
        if not 0 <= self.clearance < self.shell_thickness:
            raise ValueError('clearance must lie in [0, shell_thickness)')
        if not 0 < self.voxel_size <= self.shell_thickness / 3:
            raise ValueError('voxel_size must lie in (0, shell_thickness/3]')
        if len(self.build_volume) != 3 or min(self.build_volume) <= 0:
            raise ValueError('build_volume must be three positive lengths')
        if self.label_text and self.label_region is None:
            raise ValueError('label_text needs a label_region')

    def as_dict(self):
        return {
            'shell_thickness_mm': self.shell_thickness,
            'clearance_mm': self.clearance,
            'voxel_size_mm': self.voxel_size,
            'build_volume_mm': list(self.build_volume),
            'label_text': self.label_text,
            'label_depth_mm': self.label_depth,
            'label_region': (None if self.label_region is None else
                             [list(map(float, c))
                              for c in self.label_region]),
        }


@dataclass(frozen=True, eq=False)
class SupportResult:
    mesh: object
    solid: VoxelSolid
    protrusion: list = field(default_factory=list)
    volume_cm3: float = 0.0

    def protrusion_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['fragment_id', 'max_protrusion_mm'])
        for fragment_id, value in self.protrusion:
            writer.writerow([fragment_id, f'{value:.4f}'])
        return buffer.getvalue()

    def as_dict(self):
        return {
            'triangle_count': self.mesh.triangle_count,
            'vertex_count': self.mesh.vertex_count,
            'occupied_voxels': self.solid.count,
            'volume_cm3': self.volume_cm3,
            'protrusion': [
                {'fragment_id': i, 'max_protrusion_mm': v}
                for i, v in self.protrusion
            ],
        }


def shell_solid(solid, thickness):
    """Keep the voxels of solid within thickness of its surface."""
    return solid.with_occupancy(
        solid.occupied & (solid.depth() <= thickness))


def protrusion(vessel, fragment, spacing):
    """
    How far fragment vertices stand outside the vessel surface, in mm.

    Heights are measured along the normal of the nearest surface sample;
    0 when every vertex is inside or on the surface.
    """
    samples, owners = sample_surface(vessel, spacing)
    _, nearest = cKDTree(samples).query(fragment.vertices)
    normals = vessel.face_normals[owners[nearest]]
    heights = np.einsum('ij,ij->i', fragment.vertices - samples[nearest],
                        normals)
    highest = heights.max(initial=0.0)
    return float(highest) if highest > 0 else 0.0


def keep_out(solid, fragment, clearance):
    """
    Voxels of solid's lattice the fragment needs free.

    That is every voxel whose centre lies within clearance + half a voxel
    of the fragment surface, plus the interior of a closed fragment.
    """
    h = solid.voxel_size
    reach = clearance + h / 2
    samples, _ = sample_surface(fragment, h / 2)
    low, high = samples.min(axis=0) - reach, samples.max(axis=0) + reach
    centres = solid.centres()
    near = np.all((centres >= low) & (centres <= high), axis=-1)
    mask = np.zeros(solid.dims, dtype=bool)
    if near.any():
        distance, _ = cKDTree(samples).query(
            centres[near], distance_upper_bound=reach + 1e-9)
        mask[near] = distance <= reach
    if diagnose(fragment).is_watertight:
        mask |= voxelize(fragment, like=solid).occupied
    return mask


def make_support(vessel, fragments=(), spec=None, fragment_ids=None):
    """
    Shell the vessel and carve room for every fragment.

    The shell keeps the voxels within shell_thickness of the vessel
    surface. Each fragment then removes its keep-out voxels and an optional
    label is engraved before meshing. Fragments standing more than the
    clearance outside the vessel raise FragmentProtrusionError.
    """
    spec = spec or SupportSpec()
    fragments = list(fragments)
    if fragment_ids is None:
        fragment_ids = [f'fragment-{i:02d}' for i in range(len(fragments))]
    if len(fragment_ids) != len(fragments):
        raise ValueError('fragment_ids must match fragments')
    h = spec.voxel_size

    report = [
        (fragment_id, protrusion(vessel, fragment, h / 2))
        for fragment_id, fragment in zip(fragment_ids, fragments)
    ]
    for fragment_id, value in report:
        logger.debug('%s protrudes %.4f mm', fragment_id, value)
    if any(value > spec.clearance + 1e-9 for _, value in report):
        raise FragmentProtrusionError(report, spec.clearance)

    solid = voxelize(vessel, h)
    shell = shell_solid(solid, spec.shell_thickness).occupied
    for fragment in fragments:
        shell &= ~keep_out(solid, fragment, spec.clearance)
    support = solid.with_occupancy(shell)
    if spec.label_text:
        support = engrave_label(support, spec.label_text, spec.label_region,
                                spec.label_depth)
    if support.count == 0:
        raise EmptyResultError('Support has no material left')

    mesh = support.to_mesh()
    volume = enclosed_volume(mesh)
    logger.info('Support: %d voxels, %d triangles, %.2f cm3',
                support.count, mesh.triangle_count, volume)
    return SupportResult(mesh, support, report, volume)
