'''Test voxelization and voxel booleans.'''

import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import NotWatertightError
from core.measure import diagnose, enclosed_volume
from support.voxels import VoxelSolid, voxelize
from synth.primitives import cube, icosphere


class VoxelizeTest(SimpleTestCase):
    '''Test filling closed meshes by ray parity'''

    def test_cube_count(self):
        '''Test a 10 mm cube at 1 mm voxels fills about 1000 voxels'''
        solid = voxelize(cube(10.0), 1.0)

        self.assertAlmostEqual(solid.count, 1000, delta=50)
        self.assertEqual(solid.voxel_size, 1.0)

    def test_grazing_rays(self):
        '''Test rays through shared face diagonals still count exactly'''
        bounds = ((0.0, 0.0, 0.0), (10.0, 10.0, 10.0))
        solid = voxelize(cube(10.0), 1.0, bounds)

        self.assertEqual(solid.dims, (10, 10, 10))
        self.assertEqual(solid.count, 1000)

    def test_sphere_volume(self):
        '''Test a sphere fills its analytic volume within 2 percent'''
        solid = voxelize(icosphere(10.0, 4), 0.5)

        expected = 4.0 / 3.0 * math.pi * 10.0 ** 3
        self.assertAlmostEqual(solid.volume_mm3, expected,
                               delta=0.02 * expected)

    def test_bounds_outside_mesh(self):
        '''Test bounds that miss the mesh give an empty solid'''
        bounds = ((50.0, 50.0, 50.0), (60.0, 60.0, 60.0))
        solid = voxelize(cube(10.0), 1.0, bounds)

        self.assertEqual(solid.count, 0)
        self.assertEqual(solid.dims, (10, 10, 10))

    def test_open_mesh_rejected(self):
        '''Test a mesh with a hole cannot be voxelized'''
        mesh = cube(10.0)
        keep = np.ones(mesh.triangle_count, dtype=bool)
        keep[0] = False

        with self.assertRaises(NotWatertightError):
            voxelize(mesh.submesh(keep), 1.0)

    def test_like_lattice(self):
        '''Test voxelizing onto another solid's lattice'''
        big = voxelize(cube(20.0), 1.0)
        small = voxelize(cube(10.0, center=(10.0, 10.0, 10.0)), like=big)

        self.assertEqual(small.dims, big.dims)
        self.assertEqual(small.count, 1000)
        self.assertEqual((big - small).count, big.count - 1000)


class VoxelSolidTest(SimpleTestCase):
    '''Test the voxel solid container'''

    def setUp(self):
        self.solid = voxelize(cube(10.0), 1.0)

    def test_occupancy_values(self):
        '''Test occupancy must be zero or one'''
        grid = self.solid.grid.with_values(
            np.full(self.solid.dims, 0.5))

        with self.assertRaises(ValueError):
            VoxelSolid(grid)

    def test_booleans(self):
        '''Test union, intersection and difference counts'''
        shifted = np.zeros(self.solid.dims, dtype=bool)
        shifted[5:] = self.solid.occupied[:-5]
        other = self.solid.with_occupancy(shifted)

        self.assertEqual(other.count, 700)
        self.assertEqual((self.solid & other).count, 500)
        self.assertEqual((self.solid | other).count, 1200)
        self.assertEqual((self.solid - other).count, 500)

    def test_lattice_mismatch(self):
        '''Test booleans across lattices are refused'''
        other = voxelize(cube(10.0), 0.5)

        with self.assertRaises(ValueError):
            self.solid | other

    def test_depth(self):
        '''Test surface voxels sit half a voxel under the surface'''
        depth = self.solid.depth()
        surface = self.solid.surface()

        np.testing.assert_allclose(depth[surface], 0.5)
        self.assertEqual(depth.max(), 4.5)
        self.assertEqual(int(surface.sum()), 1000 - 8 ** 3)

    def test_lattice_bounds(self):
        '''Test a lattice covers its bounds symmetrically'''
        solid = VoxelSolid.lattice(((0, 0, 0), (4.0, 2.0, 1.0)), 1.0)

        self.assertEqual(solid.dims, (4, 2, 1))
        np.testing.assert_allclose(solid.grid.origin, [0.5, 0.5, 0.5])
        with self.assertRaises(ValueError):
            VoxelSolid.lattice(((0, 0, 0), (1, 1, 1)), 0.0)

    def test_to_mesh(self):
        '''Test meshing gives a closed surface around the voxels'''
        mesh = self.solid.to_mesh(smooth_iterations=0)

        self.assertTrue(diagnose(mesh).is_watertight)
        self.assertAlmostEqual(enclosed_volume(mesh), 1.0, delta=0.05)
