"""
Tests for axis estimation and skeleton assembly.
"""
import itertools
import tempfile
from pathlib import Path

import numpy as np

from django.test import SimpleTestCase

from skeleton.circles import Circle3D
from skeleton.profile import (
    ProfileSkeleton,
    build_skeleton,
    estimate_axis,
    read_skeleton_csv,
    write_skeleton_csv,
)

UP = (0.0, 0.0, 1.0)


class EstimateAxisTests(SimpleTestCase):
    """Test the axis through circle centres."""

    def test_two_stacked_circles(self):
        """Test the axis of two circles on Z."""
        axis = estimate_axis([Circle3D((0, 0, 0), 5, UP),
                              Circle3D((0, 0, 10), 5, UP)])

        np.testing.assert_allclose(axis.direction, UP, atol=1e-12)
        np.testing.assert_allclose(axis.point[:2], (0, 0), atol=1e-12)
        self.assertAlmostEqual(axis.coaxiality_rms, 0.0)

    def test_values_are_plain_floats(self):
        """Test the estimate holds floats like the skeleton does."""
        axis = estimate_axis([Circle3D((0, 0, 0), 5, UP),
                              Circle3D((0, 0, 10), 5, UP)])

        for value in axis.point + axis.direction + (axis.coaxiality_rms,):
            self.assertIs(type(value), float)
        self.assertNotIn('np.', repr(axis))

    def test_jittered_centres(self):
        """Test 0.1 mm jitter shows in the rms, not in the direction."""
        offsets = [0.1, -0.1, 0.1, -0.1]
        circles = [Circle3D((dx, 0, z), 20, UP)
                   for dx, z in zip(offsets, (0, 30, 60, 90))]
        axis = estimate_axis(circles)
        angle = np.degrees(np.arccos(np.clip(np.dot(axis.direction, UP),
                                             -1, 1)))

        self.assertLess(angle, 0.5)
        self.assertGreater(axis.coaxiality_rms, 0.05)
        self.assertLess(axis.coaxiality_rms, 0.11)

    def test_opposed_normals_use_centre_line(self):
        """Test conflicting normals do not override stacked centres."""
        axis = estimate_axis([Circle3D((0, 0, 0), 5, (0, 0, 1)),
                              Circle3D((0, 0, 10), 5, (0, 0, -1))])

        self.assertAlmostEqual(abs(axis.direction[2]), 1.0)

    def test_coincident_centres_use_mean_normal(self):
        """Test a shared centre takes its direction from the normals."""
        axis = estimate_axis([Circle3D((1, 1, 1), 5, (0, 1, 0)),
                              Circle3D((1, 1, 1), 7, (0, 1, 0))])

        np.testing.assert_allclose(axis.direction, (0, 1, 0))

    def test_coincident_centres_conflicting_normals_raise_error(self):
        """Test cancelling normals leave the axis undefined."""
        with self.assertRaises(ValueError):
            estimate_axis([Circle3D((0, 0, 0), 5, (0, 0, 1)),
                           Circle3D((0, 0, 0), 7, (0, 0, -1))])

    def test_single_circle_raises_error(self):
        """Test one circle is not enough."""
        with self.assertRaises(ValueError):
            estimate_axis([Circle3D((0, 0, 0), 5, UP)])


class BuildSkeletonTests(SimpleTestCase):
    """Test ring stacking."""

    def test_two_rings(self):
        """Test circles at z=0 and z=80 give heights 0 and 80."""
        skeleton = build_skeleton([Circle3D((0, 0, 0), 30, UP),
                                   Circle3D((0, 0, 80), 50, UP)])

        np.testing.assert_allclose(skeleton.rings, [(0, 30), (80, 50)],
                                   atol=1e-9)
        self.assertTrue(skeleton.bottom_closed)

    def test_unsorted_input_is_sorted(self):
        """Test rings come out in ascending height."""
        circles = [Circle3D((0, 0, z), r, UP)
                   for z, r in ((50, 40), (0, 30), (90, 35), (20, 45))]
        skeleton = build_skeleton(circles)

        np.testing.assert_allclose(skeleton.heights, [0, 20, 50, 90],
                                   atol=1e-9)
        np.testing.assert_allclose(skeleton.radii, [30, 45, 40, 35])

    def test_equal_heights_are_merged(self):
        """Test radii 40 and 42 at one height average to 41."""
        skeleton = build_skeleton([Circle3D((0, 0, 10), 40, UP),
                                   Circle3D((0, 0, 10), 42, UP),
                                   Circle3D((0, 0, 60), 30, UP)])

        self.assertEqual(len(skeleton.rings), 2)
        self.assertAlmostEqual(skeleton.rings[0][1], 41.0)

    def test_permutation_invariance(self):
        """Test every ordering of the circles gives the same skeleton."""
        circles = [Circle3D((0.05, 0, 0), 30, UP),
                   Circle3D((0, 0.04, 35), 42, UP),
                   Circle3D((-0.03, 0, 70), 38, UP)]
        reference = np.array(build_skeleton(circles).rings)
        for order in itertools.permutations(circles):
            rings = np.array(build_skeleton(list(order)).rings)
            np.testing.assert_allclose(rings, reference, atol=1e-9)

    def test_single_height_raises_error(self):
        """Test fewer than two distinct heights is refused."""
        with self.assertRaises(ValueError):
            build_skeleton([Circle3D((0, 0, 0), 30, UP),
                            Circle3D((0, 0, 0), 31, UP)])

    def test_csv_round_trip(self):
        """Test the CSV keeps rings, axis and base flag."""
        skeleton = ProfileSkeleton((1, 2, 3), (0, 1, 0),
                                   ((0, 10), (5, 12.5), (20, 8)), 0.02,
                                   bottom_closed=False)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'skeleton.csv'
            write_skeleton_csv(skeleton, path)
            text = path.read_text()
            loaded = read_skeleton_csv(path)

        self.assertIn('height_mm,radius_mm', text)
        self.assertEqual(loaded, skeleton)

    def test_invalid_rings_raise_error(self):
        """Test non-increasing heights and non-positive radii."""
        with self.assertRaises(ValueError):
            ProfileSkeleton.from_rings([(0, 10), (0, 12)])
        with self.assertRaises(ValueError):
            ProfileSkeleton.from_rings([(0, 10), (5, 0)])
