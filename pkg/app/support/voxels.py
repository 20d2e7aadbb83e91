"""
Occupancy voxels and the boolean operations the display support is built
from.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from core.conf import or_setting
from core.exceptions import NotWatertightError
from core.measure import diagnose
from core.smoothing import laplacian_smooth
from implicit.grid import ScalarGrid
from implicit.isosurface import extract_isosurface

logger = logging.getLogger(__name__)

# Barycentric band inside which a ray counts as grazing an edge or vertex.
GRAZING_TOLERANCE = 1e-9
JITTER_DIRECTION = np.array([0.5773, 0.3141])
JITTER_ATTEMPTS = 3

NEIGHBOURS = np.array([
    [1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1],
])


@dataclass(frozen=True, eq=False)
class VoxelSolid:
    """
    A solid sampled on voxel centres.

    The grid nodes are the voxel centres and its values are 0 or 1.
    """
    grid: ScalarGrid

    def __post_init__(self):
        values = self.grid.values
        if not np.all((values == 0) | (values == 1)):
            raise ValueError('Voxel occupancy must be 0 or 1')

    def __repr__(self):
        return (f'VoxelSolid(dims={self.dims}, voxel={self.voxel_size:.4g}, '
                f'occupied={self.count})')

    @classmethod
    def lattice(cls, bounds, voxel_size):
        """An empty solid whose voxels cover the box bounds=(low, high)."""
        if not voxel_size > 0:
            raise ValueError('voxel_size must be positive')
        low, high = (np.asarray(b, dtype=np.float64) for b in bounds)
        if np.any(high < low):
            raise ValueError('bounds must satisfy low <= high')
        dims = np.maximum(np.ceil((high - low) / voxel_size), 1).astype(int)
        origin = (low + high) / 2 - voxel_size * (dims - 1) / 2
        return cls(ScalarGrid(origin, voxel_size, np.zeros(tuple(dims))))

    @property
    def voxel_size(self):
        return self.grid.spacing

    @property
    def dims(self):
        return self.grid.dims

    @property
    def occupied(self):
        return self.grid.values > 0.5

    @property
    def count(self):
        return int(np.count_nonzero(self.occupied))

    @property
    def volume_mm3(self):
        return self.count * self.voxel_size ** 3

    def with_occupancy(self, mask):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != self.dims:
            raise ValueError(f'mask shape {mask.shape} does not match '
                             f'{self.dims}')
        return VoxelSolid(self.grid.with_values(mask.astype(np.float64)))

    def _check_lattice(self, other):
        if (other.dims != self.dims or other.voxel_size != self.voxel_size
                or not np.array_equal(other.grid.origin, self.grid.origin)):
            raise ValueError('Voxel solids live on different lattices')

    def __or__(self, other):
        self._check_lattice(other)
        return self.with_occupancy(self.occupied | other.occupied)

    def __and__(self, other):
        self._check_lattice(other)
        return self.with_occupancy(self.occupied & other.occupied)

    def __sub__(self, other):
        self._check_lattice(other)
        return self.with_occupancy(self.occupied & ~other.occupied)

    def centres(self):
        return self.grid.centres()

    def depth(self):
        """
        Distance of each voxel centre below the surface, in mm.

        Occupied voxels on the surface sit half a voxel deep; empty voxels
        read zero.
        """
        padded = np.pad(self.occupied, 1)
        edt = ndimage.distance_transform_edt(padded,
                                             sampling=self.voxel_size)
        edt = edt[1:-1, 1:-1, 1:-1]
        return np.where(self.occupied, edt - self.voxel_size / 2, 0.0)

    def surface(self):
        """Occupied voxels with at least one empty face neighbour."""
        padded = np.pad(self.occupied, 1)
        exposed = np.zeros(self.dims, dtype=bool)
        for step in NEIGHBOURS:
            shifted = np.roll(padded, -step, axis=(0, 1, 2))
            exposed |= ~shifted[1:-1, 1:-1, 1:-1]
        return self.occupied & exposed

    def to_mesh(self, smooth_iterations=None, smooth_lambda=None):
        """
        Mesh the occupancy at level 0.5, then Laplacian-smooth it.

        One empty layer is added around the lattice so the surface closes.
        """
        iterations = or_setting(smooth_iterations,
                                'SUPPORT_SMOOTH_ITERATIONS')
        lam = or_setting(smooth_lambda, 'SUPPORT_SMOOTH_LAMBDA')
        h = self.voxel_size
        padded = ScalarGrid(self.grid.origin - h, h,
                            np.pad(self.occupied.astype(np.float64), 1))
        mesh = extract_isosurface(padded, 0.5, inside='above').mesh
        return laplacian_smooth(mesh, iterations, lam)


def _crossings(corners, ys, zs):
    """
    Crossings of the +X rays through (y, z) lattice rows with triangles.

    Rows are numbered j * len(zs) + k. Returns the rows and x positions of
    clean crossings, plus the rows that graze a triangle edge or vertex.
    """
    yz = corners[:, :, 1:]
    e1 = yz[:, 1] - yz[:, 0]
    e2 = yz[:, 2] - yz[:, 0]
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    low = yz.min(axis=1)
    high = yz.max(axis=1)
    j0 = np.searchsorted(ys, low[:, 0], side='left')
    j1 = np.searchsorted(ys, high[:, 0], side='right')
    k0 = np.searchsorted(zs, low[:, 1], side='left')
    k1 = np.searchsorted(zs, high[:, 1], side='right')
    nk = k1 - k0
    counts = (j1 - j0) * nk
    # Triangles seen edge-on by the rays carry no crossings.
    scale = np.maximum(np.abs(e1).max(axis=1), np.abs(e2).max(axis=1))
    counts[np.abs(det) <= 1e-12 * scale ** 2] = 0

    triangle = np.repeat(np.arange(len(corners)), counts)
    start = np.cumsum(counts) - counts
    local = np.arange(int(counts.sum())) - np.repeat(start, counts)
    j = j0[triangle] + local // nk[triangle]
    k = k0[triangle] + local % nk[triangle]

    qy = ys[j] - yz[triangle, 0, 0]
    qz = zs[k] - yz[triangle, 0, 1]
    d = det[triangle]
    u = (qy * e2[triangle, 1] - qz * e2[triangle, 0]) / d
    v = (e1[triangle, 0] * qz - e1[triangle, 1] * qy) / d
    smallest = np.minimum(np.minimum(u, v), 1.0 - u - v)

    rows = j * len(zs) + k
    hit = smallest > GRAZING_TOLERANCE
    grazing = np.abs(smallest) <= GRAZING_TOLERANCE
    c = corners[triangle[hit]]
    x = (c[:, 0, 0] + u[hit] * (c[:, 1, 0] - c[:, 0, 0])
         + v[hit] * (c[:, 2, 0] - c[:, 0, 0]))
    return rows[hit], x, np.unique(rows[grazing])


def _parity(rows, x_hits, xs, row_count):
    """Inside flags per (row, x) from the crossings left of each centre."""
    width = len(xs) + 1
    first = np.searchsorted(xs, x_hits, side='right')
    toggles = np.bincount(rows * width + first,
                          minlength=row_count * width)
    toggles = toggles.reshape(row_count, width)
    return (np.cumsum(toggles, axis=1)[:, :-1] % 2).astype(bool)


def _occupancy(mesh, lattice):
    """Parity fill of mesh over the lattice; returns a bool array."""
    grid = lattice.grid
    nx, ny, nz = grid.dims
    h = grid.spacing
    xs = grid.origin[0] + h * np.arange(nx)
    ys = grid.origin[1] + h * np.arange(ny)
    zs = grid.origin[2] + h * np.arange(nz)
    corners = mesh.corners
    row_count = ny * nz

    rows, x_hits, grazing = _crossings(corners, ys, zs)
    inside = _parity(rows, x_hits, xs, row_count)
    for attempt in range(1, JITTER_ATTEMPTS + 1):
        if len(grazing) == 0:
            break
        # Re-cast grazing rows through a slightly shifted lattice.
        dy, dz = JITTER_DIRECTION * h * 1e-3 * attempt
        rows, x_hits, again = _crossings(corners, ys + dy, zs + dz)
        jittered = _parity(rows, x_hits, xs, row_count)
        inside[grazing] = jittered[grazing]
        grazing = np.intersect1d(grazing, again)
    if len(grazing):
        logger.debug('%d rays still graze after %d jitters', len(grazing),
                     JITTER_ATTEMPTS)
    return np.moveaxis(inside.reshape(ny, nz, nx), 2, 0)


def _overlaps(mesh, lattice):
    low, high = mesh.bounds
    h = lattice.voxel_size
    grid_low = lattice.grid.origin - h / 2
    grid_high = lattice.grid.upper + h / 2
    return bool(np.all(low <= grid_high) and np.all(high >= grid_low))


def voxelize(mesh, voxel_size=None, bounds=None, like=None):
    """
    Occupancy of a closed mesh on a voxel lattice.

    A voxel is occupied when its centre is inside the mesh, decided by the
    parity of +X ray crossings. The lattice is either like's, or covers
    bounds=(low, high), or by default the mesh bounds padded by two voxels.
    """
    diagnostics = diagnose(mesh)
    if not diagnostics.is_watertight:
        raise NotWatertightError(diagnostics)
    if like is not None:
        lattice = like.with_occupancy(np.zeros(like.dims, dtype=bool))
    else:
        h = or_setting(voxel_size, 'SUPPORT_VOXEL_MM')
        if bounds is None:
            low, high = mesh.bounds
            bounds = (low - 2 * h, high + 2 * h)
        lattice = VoxelSolid.lattice(bounds, h)

    if not _overlaps(mesh, lattice):
        logger.debug('Mesh lies outside the voxel bounds')
        return lattice
    solid = lattice.with_occupancy(_occupancy(mesh, lattice))
    logger.debug('Voxelized %d triangles into %d of %d voxels',
                 mesh.triangle_count, solid.count,
                 int(np.prod(solid.dims)))
    return solid
