"""Point clouds with known geometry."""

import math

import numpy as np

SPHERE_CM3 = 4.0 / 3.0 * math.pi * 10.0 ** 3 / 1000.0


def fibonacci_sphere(count, radius=10.0, centre=(0.0, 0.0, 0.0)):
    """Evenly spread points on a sphere and their outward normals."""
    i = np.arange(count) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / count)
    azimuth = math.pi * (1.0 + 5.0 ** 0.5) * i
    normals = np.column_stack([np.cos(azimuth) * np.sin(polar),
                               np.sin(azimuth) * np.sin(polar),
                               np.cos(polar)])
    return radius * normals + np.asarray(centre), normals


def sphere_sdf(grid_points, radius=10.0, centre=(0.0, 0.0, 0.0)):
    return np.linalg.norm(grid_points - np.asarray(centre), axis=-1) - radius
