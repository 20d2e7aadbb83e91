"""
Constrained shell alignment: a rotation about Z and a slide along Z.

The moving shell is subsampled deterministically and compared against a
dense sample of the fixed surface. A full (theta, dz) grid is evaluated
before a coordinate descent refines the best cell.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from core.conf import or_setting
from core.measure import sample_surface
from register.transforms import RigidTransform

logger = logging.getLogger(__name__)

OBJECTIVES = ('mean', 'spread')
THETA_TOLERANCE_RAD = 1e-5
DZ_TOLERANCE_MM = 1e-4


@dataclass(frozen=True, eq=False)
class ZAlignment:
    """Best rotation theta (rad, in [0, 2pi)) and slide dz (mm)."""
    theta: float
    dz: float
    mean_residual: float
    objective: str = 'mean'
    degenerate: bool = False
    thetas: np.ndarray = field(default=None, repr=False)
    dzs: np.ndarray = field(default=None, repr=False)
    residuals: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.mean_residual < 0:
            raise ValueError("Residual must be non-negative")
        object.__setattr__(self, 'theta',
                           float(self.theta) % (2.0 * math.pi))

    @property
    def transform(self):
        return RigidTransform.about_z(self.theta, self.dz)

    def as_dict(self):
        return {
            'theta_rad': self.theta,
            'theta_deg': math.degrees(self.theta),
            'dz_mm': self.dz,
            'mean_residual_mm': self.mean_residual,
            'objective': self.objective,
            'degenerate': self.degenerate,
        }


def subsample(points, max_samples):
    """Every k-th point, keeping at most max_samples."""
    step = max(1, math.ceil(len(points) / max_samples))
    return points[::step]


def rotate_z(points, theta):
    c, s = math.cos(theta), math.sin(theta)
    x, y = points[:, 0], points[:, 1]
    return np.column_stack([c * x - s * y, s * x + c * y, points[:, 2]])


class _Objective:
    """Residual of the moving sample under (theta, dz) against the fixed."""

    def __init__(self, moving, fixed, objective, spacing):
        self.points = moving
        surface, _ = sample_surface(fixed, spacing)
        self.tree = cKDTree(surface)
        self.reduce = np.mean if objective == 'mean' else np.std

    def __call__(self, theta, dz):
        moved = rotate_z(self.points, theta)
        moved[:, 2] += dz
        distances, _ = self.tree.query(moved)
        return float(self.reduce(distances))

    def row(self, theta, dzs):
        """Residuals at one theta for every dz in a single tree query."""
        rotated = rotate_z(self.points, theta)
        n = len(rotated)
        batch = np.tile(rotated, (len(dzs), 1))
        batch[:, 2] += np.repeat(dzs, n)
        distances, _ = self.tree.query(batch, workers=-1)
        distances = distances.reshape(len(dzs), n)
        return self.reduce(distances, axis=1)


def align_z(moving, fixed, theta_steps=None, dz_range=None, dz_steps=None,
            objective='mean', max_samples=None, surface_spacing=None):
    """
    Find the rotation about Z and slide along Z that best lays moving on
    fixed. Both meshes must already have the vessel axis on Z.
    """
    theta_steps = or_setting(theta_steps, 'ALIGN_THETA_STEPS')
    dz_range = or_setting(dz_range, 'ALIGN_DZ_RANGE_MM')
    dz_steps = or_setting(dz_steps, 'ALIGN_DZ_STEPS')
    max_samples = or_setting(max_samples, 'ALIGN_MAX_SAMPLES')
    spacing = or_setting(surface_spacing, 'ALIGN_SURFACE_SPACING_MM')
    if moving.is_empty or fixed.is_empty:
        raise ValueError("align_z needs two non-empty meshes")
    if theta_steps < 8:
        raise ValueError("theta_steps must be at least 8")
    low, high = map(float, dz_range)
    if high < low or dz_steps < 1 or (high > low and dz_steps < 2):
        raise ValueError(f"Empty dz range {dz_range} with {dz_steps} steps")
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")

    points = subsample(moving.vertices, max_samples)
    evaluate = _Objective(points, fixed, objective, spacing)
    thetas = 2.0 * math.pi * np.arange(theta_steps) / theta_steps
    dzs = np.linspace(low, high, dz_steps)
    residuals = np.vstack([evaluate.row(theta, dzs) for theta in thetas])

    # argmin returns the first minimum: lowest theta, then lowest dz.
    i, j = np.unravel_index(np.argmin(residuals), residuals.shape)
    theta, dz, best = thetas[i], dzs[j], residuals[i, j]

    theta_step = math.pi / theta_steps
    dz_step = (high - low) / max(dz_steps - 1, 1) / 2.0
    while theta_step >= THETA_TOLERANCE_RAD or dz_step >= DZ_TOLERANCE_MM:
        improved = False
        for dt, dd in ((-theta_step, 0.0), (theta_step, 0.0),
                       (0.0, -dz_step), (0.0, dz_step)):
            if dt == 0.0 and dz_step < DZ_TOLERANCE_MM:
                continue
            if dd == 0.0 and theta_step < THETA_TOLERANCE_RAD:
                continue
            value = evaluate(theta + dt, dz + dd)
            if value < best:
                theta, dz, best, improved = theta + dt, dz + dd, value, True
        if not improved:
            theta_step /= 2.0
            dz_step /= 2.0

    per_theta = residuals.min(axis=1)
    spread = per_theta.max() - per_theta.min()
    degenerate = bool(spread <= 0.01 * per_theta.mean() + 1e-9)
    if degenerate:
        logger.warning('Z alignment is degenerate: residual varies by only '
                       '%.3g mm across theta', spread)
    logger.info('Z alignment theta=%.4f deg dz=%.4f mm residual=%.4g mm',
                math.degrees(theta % (2 * math.pi)), dz, best)
    return ZAlignment(theta, dz, best, objective, degenerate,
                      thetas, dzs, residuals)
