"""
Poisson reconstruction of an indicator field on a regular grid.

Normals are splatted onto a face-staggered vector field V. The scalar field
chi solves lap(chi) = div(V) with chi = 0 on the grid boundary, so chi is
lower inside the sampled surface than outside it.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from core.conf import or_setting
from core.exceptions import DegenerateGeometryError
from implicit.grid import ScalarGrid, splat

logger = logging.getLogger(__name__)

MIN_GRID = 16
MIN_POINTS = 100


@dataclass(frozen=True, eq=False)
class PoissonSolution:
    grid: ScalarGrid
    iso_value: float
    converged: bool
    iterations: int
    relative_residual: float

    def as_dict(self):
        return {
            'dims': list(self.grid.dims),
            'spacing_mm': self.grid.spacing,
            'origin': self.grid.origin.tolist(),
            'iso_value': self.iso_value,
            'converged': self.converged,
            'iterations': self.iterations,
            'relative_residual': self.relative_residual,
        }


def laplacian(u, spacing):
    """Seven-point Laplacian with zero values outside u."""
    padded = np.pad(u, 1)
    total = (padded[2:, 1:-1, 1:-1] + padded[:-2, 1:-1, 1:-1]
             + padded[1:-1, 2:, 1:-1] + padded[1:-1, :-2, 1:-1]
             + padded[1:-1, 1:-1, 2:] + padded[1:-1, 1:-1, :-2]
             - 6.0 * u)
    return total / spacing ** 2


def divergence(fields, spacing):
    """Divergence at interior nodes of the staggered field (vx, vy, vz)."""
    n = fields[0].shape[1]
    div = np.zeros((n - 2,) * 3)
    interior = (slice(1, -1),) * 3
    for axis, field in enumerate(fields):
        delta = np.diff(field, axis=axis)
        # Trim the other two axes to the interior nodes.
        index = list(interior)
        index[axis] = slice(None)
        div += delta[tuple(index)]
    return div / spacing


def lattice_for(points, dims, padding):
    """Origin and spacing of a dims^3 cube around points plus padding."""
    low, high = points.min(axis=0), points.max(axis=0)
    extent = float(np.max(high - low))
    if extent <= 0:
        raise DegenerateGeometryError(0)
    spacing = extent * (1.0 + 2.0 * padding) / (dims - 1)
    origin = (low + high) / 2.0 - spacing * (dims - 1) / 2.0
    return origin, spacing


def poisson_reconstruct(cloud, grid=None, padding=None, rtol=None,
                        max_iterations=None):
    """
    Solve for the indicator field of an oriented cloud.

    Returns a PoissonSolution whose iso_value is the mean field value at
    the input points. When conjugate gradient stops at the iteration cap,
    the last iterate is returned with converged=False.
    """
    dims = or_setting(grid, 'POISSON_GRID')
    padding = or_setting(padding, 'POISSON_PADDING')
    rtol = or_setting(rtol, 'POISSON_RTOL')
    max_iterations = or_setting(max_iterations, 'POISSON_MAX_ITERATIONS')
    if dims < MIN_GRID:
        raise ValueError(f'Grid must be at least {MIN_GRID} per axis, '
                         f'got {dims}')
    if len(cloud) < MIN_POINTS:
        raise ValueError(f'Poisson reconstruction needs at least '
                         f'{MIN_POINTS} oriented points, got {len(cloud)}')
    if padding < 0:
        raise ValueError('padding must be non-negative')

    origin, spacing = lattice_for(cloud.points, dims, padding)
    coords = (cloud.points - origin) / spacing
    fields = []
    for axis in range(3):
        shape = [dims] * 3
        shape[axis] -= 1
        shifted = coords.copy()
        shifted[:, axis] -= 0.5
        fields.append(splat(shifted, cloud.normals[:, axis], shape))
    rhs = divergence(fields, spacing)
    norm = float(np.linalg.norm(rhs))
    if norm == 0:
        raise DegenerateGeometryError(
            0, 'Splatted normals have zero divergence')

    inner = rhs.shape
    size = rhs.size
    # cg needs a positive definite operator, hence -lap.
    operator = LinearOperator(
        (size, size), dtype=np.float64,
        matvec=lambda x: -laplacian(x.reshape(inner), spacing).ravel())
    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    # cg stops on its recurrence residual; keep the true one under rtol.
    solution, info = cg(operator, -rhs.ravel(), rtol=0.5 * rtol,
                        maxiter=max_iterations, callback=count)
    solution = solution.reshape(inner)
    residual = float(np.linalg.norm(laplacian(solution, spacing) - rhs)
                     / norm)
    converged = info == 0 and residual <= rtol
    if not converged:
        logger.warning('Poisson solve stopped after %d iterations with '
                       'relative residual %.3g', iterations, residual)

    chi = np.zeros((dims,) * 3)
    chi[1:-1, 1:-1, 1:-1] = solution
    field = ScalarGrid(origin, spacing, chi)
    iso = float(np.mean(field.sample(cloud.points)))
    logger.info('Poisson %d^3 solved in %d iterations (residual %.3g), '
                'iso %.6g', dims, iterations, residual, iso)
    return PoissonSolution(field, iso, bool(converged), iterations, residual)
