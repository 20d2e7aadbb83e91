"""
Surface-Voronoi fracturing of closed meshes into open sherds.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.transform import Rotation

from core.exceptions import NotWatertightError
from core.measure import diagnose
from core.mesh import TriangleMesh
from register.transforms import RigidTransform

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FracturePlan:
    """How to break a mesh; every random draw comes from rng_seed."""
    seed_count: int
    rng_seed: int = 0
    noise_sigma: float = 0.0
    scatter: bool = False

    def __post_init__(self):
        if self.seed_count < 2:
            raise ValueError('A fracture needs at least 2 seeds')
        if self.noise_sigma < 0:
            raise ValueError('Noise sigma must be non-negative')

    def as_dict(self):
        return {
            'seed_count': self.seed_count,
            'rng_seed': self.rng_seed,
            'noise_sigma': self.noise_sigma,
            'scatter': self.scatter,
        }


@dataclass(frozen=True, eq=False)
class Sherd:
    """
    One fragment and the pose that moved it away from the vessel.

    true_pose maps vessel coordinates onto the sherd as delivered; its
    inverse puts the sherd back. triangle_ids index the source mesh.
    """
    id: str
    mesh: TriangleMesh
    true_pose: RigidTransform
    triangle_ids: np.ndarray

    @property
    def area(self):
        return float(self.mesh.face_areas.sum())


def sample_seeds(mesh, count, rng):
    """Points uniformly distributed over the surface area."""
    areas = mesh.face_areas
    faces = rng.choice(mesh.triangle_count, size=count, p=areas / areas.sum())
    r1, r2 = rng.random((2, count))
    root = np.sqrt(r1)
    weights = np.column_stack([1.0 - root, root * (1.0 - r2), root * r2])
    return np.einsum('ij,ijk->ik', weights, mesh.corners[faces])


def random_pose(rng, reach):
    """A uniformly random rotation and a translation within reach."""
    quaternion = rng.normal(size=4)
    rotation = Rotation.from_quat(quaternion / np.linalg.norm(quaternion))
    return RigidTransform(rotation.as_matrix(),
                          rng.uniform(-reach, reach, size=3))


def fracture(mesh, plan):
    """
    Break a watertight mesh into sherds around random surface seeds.

    Each triangle goes to the seed nearest its centroid, so the sherds
    partition the source triangles. Seeds that win no triangle give no
    sherd.
    """
    diagnostics = diagnose(mesh)
    if not diagnostics.is_watertight:
        raise NotWatertightError(diagnostics)
    if plan.seed_count > mesh.triangle_count:
        raise ValueError(f'{plan.seed_count} seeds exceed the '
                         f'{mesh.triangle_count} triangles')

    rng = np.random.default_rng(plan.rng_seed)
    seeds = sample_seeds(mesh, plan.seed_count, rng)
    _, owner = cKDTree(seeds).query(mesh.face_centroids)
    normals = mesh.vertex_normals()

    sherds = []
    for label in range(plan.seed_count):
        ids = np.flatnonzero(owner == label)
        if len(ids) == 0:
            logger.debug('Seed %d owns no triangles', label)
            continue
        used, inverse = np.unique(mesh.triangles[ids], return_inverse=True)
        vertices = mesh.vertices[used]
        if plan.noise_sigma > 0:
            offsets = rng.normal(0.0, plan.noise_sigma, size=len(used))
            vertices = vertices + offsets[:, None] * normals[used]
        piece = TriangleMesh(vertices, inverse.reshape(-1, 3))
        pose = RigidTransform.identity()
        if plan.scatter:
            pose = random_pose(rng, mesh.diagonal)
            piece = pose.apply_mesh(piece)
        sherds.append(Sherd(f'sherd-{len(sherds):02d}', piece, pose, ids))
    logger.info('Fractured %d triangles into %d sherds',
                mesh.triangle_count, len(sherds))
    return sherds


def keep_coverage(sherds, coverage, rng_seed=0):
    """
    Drop sherds in a seeded random order while the rest still cover at
    least coverage of the total area.
    """
    if not 0 < coverage <= 1:
        raise ValueError('coverage must be in (0, 1]')
    total = sum(sherd.area for sherd in sherds)
    kept = list(sherds)
    order = np.random.default_rng(rng_seed).permutation(len(sherds))
    remaining = total
    for index in order:
        area = sherds[index].area
        if len(kept) > 1 and remaining - area >= coverage * total:
            kept.remove(sherds[index])
            remaining -= area
    return kept
