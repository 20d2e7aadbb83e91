"""
Tests for the convex hull.
"""
import math

import numpy as np

from django.test import SimpleTestCase

from core.exceptions import DegenerateGeometryError
from core.hull import contains, convex_hull
from core.measure import diagnose, enclosed_volume

CUBE_CORNERS = 10.0 * np.array([
    [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
    [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
])


class ConvexHullTests(SimpleTestCase):
    """Test hull construction."""

    def test_cube_corners(self):
        """Test the hull of a 10 mm cube encloses 1 cm³."""
        hull = convex_hull(CUBE_CORNERS)

        self.assertTrue(diagnose(hull).is_watertight)
        self.assertAlmostEqual(enclosed_volume(hull), 1.0, places=12)

    def test_interior_point_is_absorbed(self):
        """Test an interior point changes nothing."""
        hull = convex_hull(np.vstack([CUBE_CORNERS, [[5.0, 5.0, 5.0]]]))

        self.assertEqual(hull.vertex_count, 8)
        self.assertAlmostEqual(enclosed_volume(hull), 1.0, places=12)

    def test_random_ball(self):
        """Test every sampled point is inside a hull smaller than the ball."""
        rng = np.random.default_rng(42)
        directions = rng.normal(size=(5000, 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        points = directions * 10.0 * rng.uniform(size=(5000, 1)) ** (1 / 3)
        hull = convex_hull(points)

        self.assertLess(enclosed_volume(hull), 4.0 * math.pi / 3.0)
        self.assertTrue(np.all(contains(hull, points, 1e-6)))

    def test_hull_is_idempotent(self):
        """Test the hull of hull vertices is the same hull."""
        rng = np.random.default_rng(3)
        hull = convex_hull(rng.normal(size=(300, 3)))
        again = convex_hull(hull.vertices)

        self.assertEqual(again.vertex_count, hull.vertex_count)
        self.assertAlmostEqual(enclosed_volume(again) / enclosed_volume(hull),
                               1.0, delta=1e-9)

    def test_outward_orientation(self):
        """Test every facet normal points away from the centroid."""
        hull = convex_hull(CUBE_CORNERS)
        outward = hull.face_centroids - CUBE_CORNERS.mean(axis=0)

        self.assertTrue(np.all(
            np.einsum('ij,ij->i', hull.face_normals, outward) > 0))

    def test_degenerate_inputs_name_dimension(self):
        """Test coplanar, collinear and coincident inputs."""
        cases = {
            2: [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0.5, 0.2, 0]],
            1: [[0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 3]],
            0: [[1, 1, 1]] * 5,
        }
        for dimension, points in cases.items():
            with self.subTest(dimension=dimension):
                with self.assertRaises(DegenerateGeometryError) as ctx:
                    convex_hull(points)
                self.assertEqual(ctx.exception.dimension, dimension)
