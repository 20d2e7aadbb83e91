"""
Circle fitting for rim and profile selections.

Points are projected onto their best-fit plane, fitted algebraically and
then refined on the true point-to-circle distance.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from core.conf import or_setting
from core.exceptions import DegenerateGeometryError
from core.hull import spanned_dimension

logger = logging.getLogger(__name__)


def canonical_sign(vector, tolerance=1e-12):
    """Flip vector so its first non-negligible component of z, y, x is > 0."""
    vector = np.asarray(vector, dtype=np.float64)
    for axis in (2, 1, 0):
        if abs(vector[axis]) > tolerance:
            return vector if vector[axis] > 0 else -vector
    return vector


def plane_basis(normal):
    """Right-handed orthonormal (u, v) with u x v = normal."""
    normal = np.asarray(normal, dtype=np.float64)
    helper = np.eye(3)[np.argmin(np.abs(normal))]
    u = np.cross(helper, normal)
    u /= np.linalg.norm(u)
    v = np.cross(normal, u)
    return u, v


@dataclass(frozen=True)
class Circle3D:
    """A circle in space: centre, radius and unit plane normal."""
    center: tuple
    radius: float
    normal: tuple

    def __post_init__(self):
        center = np.asarray(self.center, dtype=np.float64)
        normal = np.asarray(self.normal, dtype=np.float64)
        if center.shape != (3,) or normal.shape != (3,):
            raise ValueError("Circle centre and normal need 3 coordinates")
        if not self.radius > 0:
            raise ValueError("Circle radius must be positive")
        length = np.linalg.norm(normal)
        if length == 0:
            raise ValueError("Circle normal must be non-zero")
        if abs(length - 1.0) > 1e-9:
            normal = normal / length
        object.__setattr__(self, 'center', tuple(map(float, center)))
        object.__setattr__(self, 'normal', tuple(map(float, normal)))
        object.__setattr__(self, 'radius', float(self.radius))

    def distances(self, points):
        """Unsigned 3D distance of each point to the circle."""
        offset = np.asarray(points, dtype=np.float64) - self.center
        normal = np.asarray(self.normal)
        height = offset @ normal
        in_plane = offset - np.outer(height, normal)
        radial = np.linalg.norm(in_plane, axis=1) - self.radius
        return np.hypot(height, radial)

    def sample(self, segments):
        """Points at segments equal angular steps around the circle."""
        u, v = plane_basis(self.normal)
        angles = 2.0 * np.pi * np.arange(segments) / segments
        return (np.asarray(self.center)
                + self.radius * (np.outer(np.cos(angles), u)
                                 + np.outer(np.sin(angles), v)))

    def as_dict(self):
        return {'center': list(self.center), 'radius': self.radius,
                'normal': list(self.normal)}


@dataclass(frozen=True)
class CircleFit:
    circle: Circle3D
    rms_residual: float
    refined: bool
    refinement_failed: bool = False
    iterations: int = 0

    def as_dict(self):
        return {**self.circle.as_dict(), 'rms_residual': self.rms_residual,
                'refined': self.refined,
                'refinement_failed': self.refinement_failed,
                'iterations': self.iterations}


def fit_circle_2d(x, y):
    """Algebraic (Kasa) fit of (x - a)^2 + (y - b)^2 = r^2."""
    design = np.column_stack([2.0 * x, 2.0 * y, np.ones(len(x))])
    (a, b, c), *_ = np.linalg.lstsq(design, x * x + y * y, rcond=None)
    squared = c + a * a + b * b
    if not squared > 0:
        raise DegenerateGeometryError(1, 'Algebraic circle fit failed')
    return a, b, float(np.sqrt(squared))


def _geometric_residuals(params, x, y):
    a, b, r = params
    return np.hypot(x - a, y - b) - r


def _geometric_jacobian(params, x, y):
    a, b, _ = params
    d = np.hypot(x - a, y - b)
    d[d == 0] = np.finfo(float).tiny
    return np.column_stack([-(x - a) / d, -(y - b) / d, -np.ones(len(x))])


def fit_circle(points, refine=True, max_iterations=None,
               step_tolerance=None):
    """
    Fit a circle to three or more 3D points.

    Returns a CircleFit. When the geometric refinement diverges the
    algebraic circle is kept and refinement_failed is set.
    """
    max_iterations = or_setting(max_iterations, 'CIRCLE_MAX_ITERATIONS')
    step_tolerance = or_setting(step_tolerance, 'CIRCLE_STEP_TOLERANCE_MM')
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(points) < 3:
        raise ValueError("A circle fit needs at least 3 points")
    dimension = spanned_dimension(points)
    if dimension < 2:
        raise DegenerateGeometryError(dimension)

    centroid = points.mean(axis=0)
    _, _, axes = np.linalg.svd(points - centroid, full_matrices=False)
    normal = canonical_sign(axes[2])
    u, v = plane_basis(normal)
    local = points - centroid
    x, y = local @ u, local @ v

    a, b, r = fit_circle_2d(x, y)
    algebraic = np.array([a, b, r])
    params, refined, failed, iterations = algebraic, False, False, 0
    if refine:
        scale = max(float(np.abs(algebraic).max()), 1.0)
        eps = np.finfo(float).eps
        result = least_squares(
            _geometric_residuals, algebraic, jac=_geometric_jacobian,
            args=(x, y), method='lm', max_nfev=max_iterations,
            xtol=max(step_tolerance / scale, eps), ftol=eps, gtol=eps,
        )
        before = np.sum(_geometric_residuals(algebraic, x, y) ** 2)
        after = np.sum(result.fun ** 2)
        if (np.all(np.isfinite(result.x)) and result.x[2] > 0
                and after <= before * (1 + 1e-9) + (1e-12 * scale) ** 2):
            params, refined, iterations = result.x, True, result.nfev
        else:
            failed = True
            logger.warning('Circle refinement diverged; keeping the '
                           'algebraic fit')

    a, b, r = params
    circle = Circle3D(centroid + a * u + b * v, abs(r), normal)
    rms = float(np.sqrt(np.mean(circle.distances(points) ** 2)))
    logger.debug('Circle r=%.6f rms=%.3g (%d points)', circle.radius, rms,
                 len(points))
    return CircleFit(circle, rms, refined, failed, iterations)
