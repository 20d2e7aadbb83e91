"""
Tests for reading and writing OBJ, PLY and STL files.
"""
import struct
import tempfile
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from django.test import SimpleTestCase

from core.exceptions import MeshFormatError, MeshIOError
from core.io import load_mesh, save_mesh
from core.measure import diagnose, enclosed_volume
from core.mesh import TriangleMesh
from synth.primitives import cube


class MeshIOTests(SimpleTestCase):
    """Test mesh file formats."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, content):
        path = self.root / name
        if isinstance(content, str):
            content = content.encode('ascii')
        path.write_bytes(content)
        return path

    def test_minimal_obj(self):
        """Test a one-triangle OBJ loads with 0-based indices."""
        path = self.write('tri.obj', 'v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n')
        mesh = load_mesh(path)

        self.assertEqual(mesh.vertex_count, 3)
        np.testing.assert_array_equal(mesh.triangles, [[0, 1, 2]])

    def test_obj_quad_is_fan_triangulated(self):
        """Test 'f 1 2 3 4' becomes (1,2,3) and (1,3,4)."""
        path = self.write(
            'quad.obj', 'v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n')
        mesh = load_mesh(path)

        np.testing.assert_array_equal(mesh.triangles, [[0, 1, 2], [0, 2, 3]])

    def test_obj_slash_suffixes_are_ignored(self):
        """Test texture and normal references in faces are accepted."""
        path = self.write(
            'slash.obj',
            'v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nf 1/1/1 2/1/1 3//1\n')

        self.assertEqual(load_mesh(path).triangle_count, 1)

    def test_obj_bad_index_reports_line(self):
        """Test an out of range index names the offending line."""
        path = self.write('bad.obj', 'v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n')

        with self.assertRaises(MeshFormatError) as ctx:
            load_mesh(path)
        self.assertEqual(ctx.exception.line, 4)

    def test_obj_syntax_error_reports_line(self):
        """Test a malformed coordinate names the offending line."""
        path = self.write('bad.obj', 'v 0 0 0\nv 1 zero 0\n')

        with self.assertRaises(MeshFormatError) as ctx:
            load_mesh(path)
        self.assertEqual(ctx.exception.line, 2)

    def test_zero_triangles_raises_error(self):
        """Test a file with only vertices is refused."""
        path = self.write('empty.obj', 'v 0 0 0\n')

        with self.assertRaises(MeshFormatError):
            load_mesh(path)

    def test_missing_file_raises_io_error(self):
        """Test an unreadable path raises MeshIOError."""
        with self.assertRaises(MeshIOError):
            load_mesh(self.root / 'missing.obj')

    def test_binary_stl_cube_welds_watertight(self):
        """Test a hand-built 12 facet STL becomes a closed cube."""
        mesh = cube()
        header = b'unit cube'.ljust(80, b' ')
        body = b''
        for corners, normal in zip(mesh.corners, mesh.face_normals):
            body += struct.pack('<12fH', *normal, *corners.ravel(), 0)
        path = self.write('cube.stl',
                          header + struct.pack('<I', 12) + body)
        loaded = load_mesh(path)

        self.assertEqual(loaded.triangle_count, 12)
        self.assertTrue(diagnose(loaded, 1e-4).is_watertight)

    def test_round_trip_preserves_connectivity(self):
        """Test save then load keeps coordinates and triangles."""
        # Vertex order differs from first appearance in the facets.
        mesh = TriangleMesh(
            [[0.0, 0.0, 0.0], [123.456789, 7.1234567, 88.7654321],
             [10.0, 0.0, 0.0], [0.0, 10.0, 0.0]],
            [[1, 2, 3], [1, 3, 0], [1, 0, 2], [2, 0, 3]])
        for name in ('c.obj', 'c.ply', 'a.ply', 'a.stl'):
            with self.subTest(name=name):
                path = self.root / name
                save_mesh(mesh, path, binary=not name.startswith('a'))
                loaded = load_mesh(path)

                distance, index = cKDTree(mesh.vertices).query(
                    loaded.vertices)
                self.assertLess(distance.max(), 1e-6)
                np.testing.assert_array_equal(index[loaded.triangles],
                                              mesh.triangles)

    def test_binary_stl_is_float32(self):
        """Test binary STL keeps triangles but only float32 coordinates."""
        mesh = TriangleMesh(
            [[0.0, 0.0, 0.0], [123.456789, 7.1234567, 88.7654321],
             [10.0, 0.0, 0.0], [0.0, 10.0, 0.0]],
            [[1, 2, 3], [1, 3, 0], [1, 0, 2], [2, 0, 3]])
        path = self.root / 'b.stl'
        save_mesh(mesh, path)
        loaded = load_mesh(path)

        self.assertEqual(loaded.triangles.tolist(),
                         [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]])
        distance, index = cKDTree(mesh.vertices).query(loaded.vertices)
        self.assertLess(distance.max(), 1e-4)
        np.testing.assert_array_equal(index[loaded.triangles],
                                      mesh.triangles)

    def test_stl_round_trip_volume(self):
        """Test a cube saved as STL still measures 1 cm³."""
        path = self.root / 'cube.stl'
        save_mesh(cube(10.0), path)

        self.assertAlmostEqual(enclosed_volume(load_mesh(path)), 1.0,
                               places=9)

    def test_large_ply_round_trip(self):
        """Test 100k random vertices survive binary PLY to 1e-6 mm."""
        rng = np.random.default_rng(7)
        vertices = rng.uniform(-500, 500, size=(100_000, 3))
        triangles = np.stack([np.arange(0, 99_998),
                              np.arange(1, 99_999),
                              np.arange(2, 100_000)], axis=1)
        mesh = TriangleMesh(vertices, triangles)
        path = self.root / 'big.ply'
        save_mesh(mesh, path)
        loaded = load_mesh(path)

        self.assertLess(np.abs(loaded.vertices - vertices).max(), 1e-6)
        np.testing.assert_array_equal(loaded.triangles, triangles)

    def test_float32_ply_is_read(self):
        """Test float32 vertices with uchar/int32 faces."""
        header = ('ply\nformat binary_little_endian 1.0\n'
                  'element vertex 3\nproperty float x\nproperty float y\n'
                  'property float z\nelement face 1\n'
                  'property list uchar int vertex_indices\nend_header\n')
        body = struct.pack('<9f', 0, 0, 0, 1, 0, 0, 0, 1, 0)
        body += struct.pack('<B3i', 3, 0, 1, 2)
        path = self.write('f32.ply', header.encode('ascii') + body)
        mesh = load_mesh(path)

        self.assertEqual(mesh.triangle_count, 1)
        np.testing.assert_allclose(mesh.vertices[1], [1, 0, 0])
