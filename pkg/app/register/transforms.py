"""
Rigid poses for fragments and shells.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation


def nearest_rotation(matrix):
    """Project a 3x3 matrix onto SO(3) through its SVD."""
    u, _, vt = np.linalg.svd(np.asarray(matrix, dtype=np.float64))
    d = np.sign(np.linalg.det(u @ vt)) or 1.0
    return u @ np.diag([1.0, 1.0, d]) @ vt


@dataclass(frozen=True, eq=False)
class RigidTransform:
    """x -> scale * R x + t, with R a proper rotation."""
    rotation: np.ndarray
    translation: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        rotation = np.asarray(self.rotation, dtype=np.float64)
        translation = np.asarray(self.translation, dtype=np.float64)
        if rotation.shape != (3, 3) or translation.shape != (3,):
            raise ValueError("Rotation must be 3x3 and translation 3D")
        if abs(np.linalg.det(rotation) - 1.0) > 1e-6:
            raise ValueError("Rotation must have determinant +1")
        if not self.scale > 0:
            raise ValueError("Scale must be positive")
        rotation = nearest_rotation(rotation)
        rotation.setflags(write=False)
        translation = translation.copy()
        translation.setflags(write=False)
        object.__setattr__(self, 'rotation', rotation)
        object.__setattr__(self, 'translation', translation)
        object.__setattr__(self, 'scale', float(self.scale))

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def about_z(cls, theta, dz=0.0):
        """Rotation by theta radians about +Z, then a slide along Z."""
        return cls(Rotation.from_rotvec([0.0, 0.0, theta]).as_matrix(),
                   [0.0, 0.0, dz])

    @classmethod
    def from_rotvec(cls, rotvec, translation):
        return cls(Rotation.from_rotvec(rotvec).as_matrix(), translation)

    @classmethod
    def from_dict(cls, data):
        """Read a pose block: row-major 'rotation' (9) and 'translation'."""
        rotation = np.asarray(data.get('rotation', np.eye(3).ravel()),
                              dtype=np.float64).reshape(3, 3)
        return cls(rotation, data.get('translation', (0.0, 0.0, 0.0)),
                   data.get('scale', 1.0))

    def as_dict(self):
        data = {
            'rotation': [float(x) for x in self.rotation.ravel()],
            'translation': [float(x) for x in self.translation],
        }
        if self.scale != 1.0:
            data['scale'] = self.scale
        return data

    @property
    def angle(self):
        """Rotation angle in radians."""
        return float(np.linalg.norm(
            Rotation.from_matrix(self.rotation).as_rotvec()))

    def apply(self, points):
        points = np.asarray(points, dtype=np.float64)
        return self.scale * points @ self.rotation.T + self.translation

    def apply_mesh(self, mesh):
        return mesh.transformed(self.rotation, self.translation, self.scale)

    def compose(self, other):
        """The transform applying other first, then self."""
        return RigidTransform(
            self.rotation @ other.rotation,
            self.scale * other.translation @ self.rotation.T
            + self.translation,
            self.scale * other.scale,
        )

    def inverse(self):
        rotation = self.rotation.T
        return RigidTransform(rotation,
                              -(rotation @ self.translation) / self.scale,
                              1.0 / self.scale)

    def difference(self, other):
        """Rotation angle (rad) and translation gap (mm) to other."""
        relative = self.rotation.T @ other.rotation
        angle = float(np.linalg.norm(
            Rotation.from_matrix(relative).as_rotvec()))
        return angle, float(np.linalg.norm(self.translation
                                           - other.translation))
