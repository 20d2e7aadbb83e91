"""
Tests for the triangle mesh container and welding.
"""
import numpy as np

from django.test import SimpleTestCase

from core.mesh import TriangleMesh, weld
from synth.primitives import cube


class TriangleMeshTests(SimpleTestCase):
    """Test mesh construction invariants."""

    def test_valid_mesh_is_read_only(self):
        """Test vertex and triangle arrays cannot be mutated."""
        mesh = TriangleMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])

        self.assertEqual(mesh.vertex_count, 3)
        self.assertEqual(mesh.triangle_count, 1)
        with self.assertRaises(ValueError):
            mesh.vertices[0, 0] = 5.0

    def test_index_out_of_range_raises_error(self):
        """Test a triangle index beyond the vertex count is refused."""
        with self.assertRaises(ValueError):
            TriangleMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 3]])

    def test_repeated_index_raises_error(self):
        """Test a triangle that repeats a vertex is refused."""
        with self.assertRaises(ValueError):
            TriangleMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 1]])

    def test_non_finite_vertex_raises_error(self):
        """Test NaN coordinates are refused."""
        with self.assertRaises(ValueError):
            TriangleMesh([[0, 0, np.nan], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])

    def test_submesh_drops_unused_vertices(self):
        """Test selecting triangles compacts the vertex table."""
        mesh = cube()
        part = mesh.submesh(np.arange(12) < 2)

        self.assertEqual(part.triangle_count, 2)
        self.assertEqual(part.vertex_count, 4)

    def test_transformed_applies_scale_then_rotation(self):
        """Test x -> s R x + t."""
        mesh = TriangleMesh([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 2]])
        quarter = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]], dtype=float)
        moved = mesh.transformed(quarter, [0, 0, 5], scale=2.0)

        np.testing.assert_allclose(moved.vertices[0], [0, 2, 5])


class WeldTests(SimpleTestCase):
    """Test vertex welding."""

    def test_weld_merges_duplicated_corners(self):
        """Test a triangle soup cube welds to 8 vertices."""
        mesh = cube()
        soup = TriangleMesh(mesh.corners.reshape(-1, 3),
                            np.arange(36).reshape(12, 3))
        welded = weld(soup, 1e-6)

        self.assertEqual(welded.vertex_count, 8)
        self.assertEqual(welded.triangle_count, 12)

    def test_weld_drops_collapsed_triangles(self):
        """Test triangles thinner than the tolerance disappear."""
        mesh = TriangleMesh(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1e-7, 0, 0]],
            [[0, 1, 2], [0, 3, 2]],
        )
        welded = weld(mesh, 1e-4)

        self.assertEqual(welded.triangle_count, 1)

    def test_weld_is_order_stable(self):
        """Test cluster numbering follows first occurrence."""
        mesh = TriangleMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 0]],
                            [[0, 1, 2], [3, 2, 1]])
        welded = weld(mesh, 0.0)

        np.testing.assert_array_equal(welded.triangles, [[0, 1, 2],
                                                         [0, 2, 1]])
