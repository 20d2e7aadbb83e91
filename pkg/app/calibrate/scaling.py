"""
Real-world scaling from a known reference distance, plus unit and
up-axis normalisation of imported meshes.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

logger = logging.getLogger(__name__)

UNIT_TO_MM = {'mm': 1.0, 'cm': 10.0, 'm': 1000.0}

AXES = {
    'x': np.array([1.0, 0.0, 0.0]),
    'y': np.array([0.0, 1.0, 0.0]),
    'z': np.array([0.0, 0.0, 1.0]),
}


@dataclass(frozen=True)
class ScaleCalibration:
    """Two reference points in model units and their true distance in mm."""
    point_a: tuple
    point_b: tuple
    real_distance: float

    def __post_init__(self):
        a = np.asarray(self.point_a, dtype=np.float64)
        b = np.asarray(self.point_b, dtype=np.float64)
        if a.shape != (3,) or b.shape != (3,):
            raise ValueError("Reference points need 3 coordinates")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("Reference points must be finite")
        if not self.real_distance > 0:
            raise ValueError("Real distance must be positive")
        if np.linalg.norm(a - b) == 0:
            raise ValueError("Reference points coincide")
        object.__setattr__(self, 'point_a', tuple(map(float, a)))
        object.__setattr__(self, 'point_b', tuple(map(float, b)))
        object.__setattr__(self, 'real_distance', float(self.real_distance))

    @property
    def measured_distance(self):
        return float(np.linalg.norm(np.subtract(self.point_a, self.point_b)))

    @property
    def factor(self):
        return self.real_distance / self.measured_distance

    def as_dict(self):
        """Audit block stored next to the scaled mesh."""
        return {
            'point_a': list(self.point_a),
            'point_b': list(self.point_b),
            'real_distance_mm': self.real_distance,
            'measured_distance': self.measured_distance,
            'factor': self.factor,
        }


def compute_factor(point_a, point_b, real_distance):
    """Return the calibration whose factor is real / measured distance."""
    calibration = ScaleCalibration(point_a, point_b, real_distance)
    logger.info('Scale factor %.9g (measured %.6g, real %.6g mm)',
                calibration.factor, calibration.measured_distance,
                calibration.real_distance)
    return calibration


def apply_scale(mesh, calibration, recenter=False):
    """
    Multiply every coordinate by the calibration factor about the origin.

    With recenter the scaled mesh is translated so its vertex centroid
    sits at the origin.
    """
    scaled = mesh.transformed(scale=calibration.factor)
    if recenter:
        scaled = scaled.translated(-scaled.vertices.mean(axis=0))
    return scaled


def check_consistent(first, second, tolerance=0.01):
    """
    Require two calibrations to agree on their real reference distance.

    Shells scanned separately must be scaled against the same physical
    reference; the distances may differ by at most tolerance (relative).
    """
    a, b = first.real_distance, second.real_distance
    gap = abs(a - b) / max(a, b)
    if gap > tolerance:
        raise ValueError(
            f"Calibrations disagree: {a:.4g} mm vs {b:.4g} mm "
            f"({100 * gap:.2f}% > {100 * tolerance:.2f}%)"
        )
    return gap


def normalize_units(mesh, unit):
    """Convert a mesh declared in mm, cm or m into millimetres."""
    try:
        factor = UNIT_TO_MM[unit]
    except KeyError:
        raise ValueError(f"Unknown unit {unit!r}; use mm, cm or m") from None
    if factor == 1.0:
        return mesh
    return mesh.transformed(scale=factor)


def up_rotation(up_axis):
    """Proper rotation taking the declared up axis onto +Z."""
    axis = up_axis.lower().lstrip('+')
    negative = up_axis.startswith('-')
    if axis not in AXES:
        raise ValueError(f"Unknown up axis {up_axis!r}; use x, y or z")
    source = -AXES[axis] if negative else AXES[axis]
    target = AXES['z']
    if np.allclose(source, target):
        return np.eye(3)
    if np.allclose(source, -target):
        return Rotation.from_rotvec([np.pi, 0.0, 0.0]).as_matrix()
    rotation, _ = Rotation.align_vectors([target], [source])
    return rotation.as_matrix()


def reorient_up(mesh, up_axis):
    """Rotate the mesh so the declared up axis becomes +Z."""
    rotation = up_rotation(up_axis)
    if np.array_equal(rotation, np.eye(3)):
        return mesh
    return mesh.transformed(rotation)
