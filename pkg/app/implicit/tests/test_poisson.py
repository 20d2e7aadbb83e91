'''Test the Poisson indicator solve.'''

import numpy as np

from django.test import SimpleTestCase, tag

from core.measure import diagnose, enclosed_volume, hausdorff_distance
from core.measure import signed_volume_mm3
from implicit.isosurface import extract_isosurface, touches_boundary
from implicit.normals import OrientedPointCloud
from implicit.poisson import laplacian, poisson_reconstruct
from implicit.tests.clouds import SPHERE_CM3, fibonacci_sphere


def sphere_cloud(count=10000):
    points, normals = fibonacci_sphere(count)
    return OrientedPointCloud(points, normals)


def sphere_volume_error(grid):
    solution = poisson_reconstruct(sphere_cloud(), grid=grid)
    mesh = extract_isosurface(solution.grid, solution.iso_value).mesh
    return abs(enclosed_volume(mesh) - SPHERE_CM3) / SPHERE_CM3


class PoissonReconstructTest(SimpleTestCase):
    '''Test poisson_reconstruct on sphere clouds'''

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cloud = sphere_cloud()
        cls.solution = poisson_reconstruct(cls.cloud, grid=64)
        cls.surface = extract_isosurface(cls.solution.grid,
                                         cls.solution.iso_value)
        cls.mesh = cls.surface.mesh

    def test_solve_converges(self):
        '''Test the reported relative residual'''
        self.assertTrue(self.solution.converged)
        self.assertLessEqual(self.solution.relative_residual, 1e-6)
        self.assertGreater(self.solution.iterations, 0)

    def test_indicator_is_lower_inside(self):
        '''Test the field sign convention'''
        grid = self.solution.grid
        centre, corner = grid.sample([[0.0, 0.0, 0.0], grid.origin])

        self.assertLess(centre, self.solution.iso_value)
        self.assertGreater(corner, self.solution.iso_value)
        self.assertFalse(touches_boundary(grid, self.solution.iso_value))
        self.assertFalse(self.surface.touches_boundary)

    def test_sphere_volume(self):
        '''Test the extracted sphere is closed and has the right volume'''
        self.assertTrue(diagnose(self.mesh).is_watertight)
        self.assertAlmostEqual(enclosed_volume(self.mesh), SPHERE_CM3,
                               delta=0.05 * SPHERE_CM3)

    def test_grid_padding(self):
        '''Test the lattice covers the cloud plus ten percent each side'''
        grid = self.solution.grid
        self.assertEqual(grid.dims, (64, 64, 64))
        np.testing.assert_allclose(grid.origin, [-12.0] * 3, atol=1e-2)
        np.testing.assert_allclose(grid.upper, [12.0] * 3, atol=1e-2)

    def test_flipped_normals_invert_classification(self):
        '''Test flipped normals give the same surface, inside out'''
        flipped = poisson_reconstruct(self.cloud.flipped(), grid=64)

        with self.assertLogs('implicit.isosurface', level='WARNING'):
            mesh = extract_isosurface(flipped.grid, flipped.iso_value).mesh

        self.assertAlmostEqual(flipped.iso_value, -self.solution.iso_value)
        self.assertTrue(touches_boundary(flipped.grid, flipped.iso_value))
        self.assertLess(hausdorff_distance(mesh, self.mesh), 1e-6)
        self.assertLess(signed_volume_mm3(mesh), 0.0)
        self.assertGreater(signed_volume_mm3(self.mesh), 0.0)

    def test_open_cap_is_closed(self):
        '''Test a missing 20 degree polar cap is extrapolated over'''
        keep = self.cloud.normals[:, 2] < np.cos(np.radians(20.0))
        cloud = OrientedPointCloud(self.cloud.points[keep],
                                   self.cloud.normals[keep])

        solution = poisson_reconstruct(cloud, grid=64)
        mesh = extract_isosurface(solution.grid, solution.iso_value).mesh

        self.assertTrue(diagnose(mesh).is_watertight)
        self.assertAlmostEqual(enclosed_volume(mesh), SPHERE_CM3,
                               delta=0.1 * SPHERE_CM3)

    def test_translation_moves_the_surface(self):
        '''Test translating the cloud translates the surface'''
        offset = 0.5 * self.solution.grid.spacing * np.ones(3)
        moved = poisson_reconstruct(self.cloud.translated(offset), grid=64)

        mesh = extract_isosurface(moved.grid, moved.iso_value).mesh

        self.assertLess(hausdorff_distance(mesh, self.mesh.translated(offset)),
                        self.solution.grid.spacing)

    def test_too_small_inputs(self):
        '''Test grids under 16 and clouds under 100 points are refused'''
        with self.assertRaises(ValueError):
            poisson_reconstruct(self.cloud, grid=8)
        with self.assertRaises(ValueError):
            poisson_reconstruct(sphere_cloud(50), grid=32)

    def test_iteration_cap_reports_not_converged(self):
        '''Test stopping early keeps the last iterate'''
        with self.assertLogs('implicit.poisson', level='WARNING'):
            solution = poisson_reconstruct(self.cloud, grid=32,
                                           max_iterations=3)

        self.assertFalse(solution.converged)
        self.assertEqual(solution.iterations, 3)
        self.assertGreater(solution.relative_residual, 1e-6)


class LaplacianTest(SimpleTestCase):
    '''Test the discrete operator'''

    def test_quadratic_has_constant_laplacian(self):
        '''Test lap(x^2 + y^2 + z^2) = 6 away from the boundary'''
        axis = np.arange(10, dtype=float)
        x, y, z = np.meshgrid(axis, axis, axis, indexing='ij')

        result = laplacian(x ** 2 + y ** 2 + z ** 2, 1.0)

        np.testing.assert_allclose(result[1:-1, 1:-1, 1:-1], 6.0)


@tag('slow')
class PoissonFullResolutionTest(SimpleTestCase):
    '''Test the 128 grid sphere and refinement'''

    def test_sphere_at_128(self):
        '''Test the 10k point sphere at full resolution'''
        error128 = sphere_volume_error(128)
        error64 = sphere_volume_error(64)

        self.assertLess(error128, 0.05)
        self.assertLessEqual(error128, error64)
