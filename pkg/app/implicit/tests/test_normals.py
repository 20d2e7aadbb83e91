'''Test normal estimation.'''

import numpy as np

from django.test import SimpleTestCase

from implicit.normals import OrientedPointCloud, estimate_normals
from implicit.tests.clouds import fibonacci_sphere


def plane_grid(size=20, spacing=0.2, height=0.0):
    u, v = np.meshgrid(np.arange(size) * spacing, np.arange(size) * spacing)
    return np.column_stack([u.ravel(), v.ravel(),
                            np.full(size * size, height)])


class EstimateNormalsTest(SimpleTestCase):
    '''Test estimate_normals'''

    def test_sphere_normals_are_radial(self):
        '''Test normals on a sphere point outward'''
        points, radial = fibonacci_sphere(2000)

        cloud = estimate_normals(points, k=10)

        cosines = np.einsum('ij,ij->i', cloud.normals, radial)
        within = np.mean(cosines >= np.cos(np.radians(5.0)))
        self.assertGreaterEqual(within, 0.99)

    def test_plane_normals_are_parallel(self):
        '''Test a flat cloud gets one consistently signed normal'''
        cloud = estimate_normals(plane_grid(), k=8)

        z = cloud.normals[:, 2]
        self.assertTrue(np.all(np.abs(z) >= np.cos(np.radians(1.0))))
        self.assertTrue(np.all(np.sign(z) == np.sign(z[0])))

    def test_parallel_sheets_point_apart(self):
        '''Test two sheets 1 mm apart get opposite outward normals'''
        lower, upper = plane_grid(height=0.0), plane_grid(height=1.0)

        cloud = estimate_normals(np.vstack([lower, upper]), k=6)

        self.assertTrue(np.all(cloud.normals[:len(lower), 2] < -0.99))
        self.assertTrue(np.all(cloud.normals[len(lower):, 2] > 0.99))

    def test_degenerate_neighbourhoods_are_flagged(self):
        '''Test stacked duplicates borrow a neighbour normal'''
        points, _ = fibonacci_sphere(500)
        stacked = np.repeat(points[:1] * 1.5, 12, axis=0)

        cloud = estimate_normals(np.vstack([points, stacked]), k=10)

        self.assertEqual(int(cloud.degenerate.sum()), 12)
        np.testing.assert_allclose(np.linalg.norm(cloud.normals, axis=1), 1.0)

    def test_k_out_of_range(self):
        '''Test k below 3 or not below the point count'''
        points, _ = fibonacci_sphere(10)
        for k in (2, 10):
            with self.subTest(k=k):
                with self.assertRaises(ValueError):
                    estimate_normals(points, k=k)


class OrientedPointCloudTest(SimpleTestCase):
    '''Test the oriented cloud container'''

    def test_normals_must_be_unit(self):
        '''Test non-unit normals are rejected'''
        with self.assertRaises(ValueError):
            OrientedPointCloud([[0, 0, 0]], [[0, 0, 2]])

    def test_counts_must_match(self):
        '''Test one normal per point'''
        with self.assertRaises(ValueError):
            OrientedPointCloud([[0, 0, 0], [1, 0, 0]], [[0, 0, 1]])

    def test_flipped(self):
        '''Test flipping negates every normal'''
        points, normals = fibonacci_sphere(20)
        cloud = OrientedPointCloud(points, normals)

        np.testing.assert_array_equal(cloud.flipped().normals, -normals)
