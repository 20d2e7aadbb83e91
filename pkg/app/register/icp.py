"""
Point-to-point ICP with a fixed correspondence rejection radius.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from core.conf import or_setting
from core.exceptions import NoCorrespondenceError
from register.transforms import RigidTransform

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class IcpResult:
    """
    Final pose and its error.

    rms is the truncated RMS: rejected points count at the rejection
    radius, which makes it non-increasing over the iterations.
    """
    transform: RigidTransform
    rms: float
    inlier_rms: float
    inlier_fraction: float
    iterations: int
    history: tuple
    converged: bool

    def as_dict(self):
        return {
            **self.transform.as_dict(),
            'rms_mm': self.rms,
            'inlier_rms_mm': self.inlier_rms,
            'inlier_fraction': self.inlier_fraction,
            'iterations': self.iterations,
            'rms_history': list(self.history),
            'converged': self.converged,
        }


def best_rigid(source, target):
    """Least-squares rotation and translation mapping source onto target."""
    source_mean = source.mean(axis=0)
    target_mean = target.mean(axis=0)
    covariance = (source - source_mean).T @ (target - target_mean)
    u, _, vt = np.linalg.svd(covariance)
    d = np.sign(np.linalg.det(vt.T @ u.T)) or 1.0
    rotation = vt.T @ np.diag([1.0, 1.0, d]) @ u.T
    return RigidTransform(rotation, target_mean - rotation @ source_mean)


def median_spacing(points):
    """Median distance from each point to its nearest other point."""
    distances, _ = cKDTree(points).query(points, k=2)
    return float(np.median(distances[:, 1]))


def _points(shape):
    return shape.vertices if hasattr(shape, 'vertices') else np.asarray(
        shape, dtype=np.float64).reshape(-1, 3)


def icp_rigid(moving, fixed, seed=None, max_iterations=None,
              convergence_mm=None, rejection_factor=None):
    """
    Refine the pose placing moving on fixed, starting from seed.

    Each iteration matches every moving point to its nearest fixed vertex,
    drops pairs beyond the rejection radius and solves for the best rigid
    pose from the original moving points.
    """
    max_iterations = or_setting(max_iterations, 'ICP_MAX_ITERATIONS')
    convergence_mm = or_setting(convergence_mm, 'ICP_CONVERGENCE_MM')
    factor = or_setting(rejection_factor, 'ICP_REJECTION_FACTOR')
    source = _points(moving)
    target = _points(fixed)
    if len(source) == 0 or len(target) < 2:
        raise ValueError("ICP needs non-empty moving and fixed inputs")
    radius = factor * median_spacing(target)
    tree = cKDTree(target)
    pose = seed or RigidTransform.identity()

    history, converged = [], False
    inlier_rms, fraction = 0.0, 0.0
    for iteration in range(1, max_iterations + 1):
        distances, indices = tree.query(pose.apply(source),
                                        distance_upper_bound=radius)
        valid = np.isfinite(distances)
        if valid.sum() < 3:
            raise NoCorrespondenceError(
                f'Only {int(valid.sum())} point pairs lie within the '
                f'rejection radius {radius:.4g} mm')
        truncated = np.where(valid, distances, radius)
        rms = float(np.sqrt(np.mean(truncated ** 2)))
        inlier_rms = float(np.sqrt(np.mean(distances[valid] ** 2)))
        fraction = float(valid.mean())
        history.append(rms)
        if rms < convergence_mm or (
                len(history) > 1 and history[-2] - rms < convergence_mm):
            converged = True
            break
        pose = best_rigid(source[valid], target[indices[valid]])
        logger.debug('ICP iteration %d: rms %.6g mm, %.1f%% inliers',
                     iteration, rms, 100 * fraction)

    if not converged:
        logger.warning('ICP stopped at the %d iteration cap (rms %.4g mm)',
                       max_iterations, history[-1])
    return IcpResult(pose, history[-1], inlier_rms, fraction, len(history),
                     tuple(history), converged)
