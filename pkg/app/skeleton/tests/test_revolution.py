"""
Tests for surfaces of revolution and skeleton volumes.
"""
import math

import numpy as np

from django.test import SimpleTestCase

from core.measure import diagnose, enclosed_volume, signed_volume_mm3
from skeleton.profile import ProfileSkeleton
from skeleton.revolution import (
    analytic_volume,
    compare_volumes,
    lathe,
    revolve,
    skeleton_hull_volume,
)

CYLINDER = ProfileSkeleton.from_rings([(0, 10), (10, 10)])
WAISTED = ProfileSkeleton.from_rings([(0, 50), (40, 20), (80, 50)])


class RevolveTests(SimpleTestCase):
    """Test revolved meshes."""

    def test_cylinder_volume(self):
        """Test 64 segments are within 0.5% of the analytic cylinder."""
        mesh = revolve(CYLINDER, 64)
        analytic = math.pi * 100 * 10 / 1000

        self.assertTrue(diagnose(mesh).is_watertight)
        self.assertLess(abs(enclosed_volume(mesh) - analytic) / analytic,
                        0.005)

    def test_cylinder_converges(self):
        """Test 256 segments are within 0.05%."""
        analytic = analytic_volume(CYLINDER)
        volume = enclosed_volume(revolve(CYLINDER, 256))

        self.assertLess(abs(volume - analytic) / analytic, 0.0005)

    def test_cone_volume(self):
        """Test a near-zero bottom radius gives a cone."""
        cone = ProfileSkeleton.from_rings([(0, 1e-6), (10, 10)])
        analytic = math.pi * 100 * 10 / 3 / 1000
        mesh = revolve(cone, 64)

        self.assertTrue(diagnose(mesh).is_watertight)
        self.assertLess(abs(enclosed_volume(mesh) - analytic) / analytic,
                        0.005)

    def test_tilted_axis_keeps_volume(self):
        """Test the axis direction does not change the volume."""
        tilted = ProfileSkeleton((5, -2, 7), (1, 1, 0.3), CYLINDER.rings)

        self.assertAlmostEqual(enclosed_volume(revolve(tilted, 64)) /
                               enclosed_volume(revolve(CYLINDER, 64)), 1.0,
                               delta=1e-9)

    def test_outward_orientation(self):
        """Test the revolved solid winds outward."""
        mesh = revolve(WAISTED, 32)

        self.assertTrue(diagnose(mesh).is_consistently_oriented)
        self.assertGreater(signed_volume_mm3(mesh), 0)

    def test_too_few_segments_raise_error(self):
        """Test fewer than 8 segments are refused."""
        with self.assertRaises(ValueError):
            revolve(CYLINDER, 7)

    def test_lathe_annulus_is_closed(self):
        """Test a ring-shaped profile gives a closed tube."""
        tube = lathe([(10, 0), (12, 0), (12, 5), (10, 5), (10, 0)], 48)
        expected = math.pi * (144 - 100) * 5 / 1000

        self.assertTrue(diagnose(tube).is_watertight)
        self.assertLess(abs(enclosed_volume(tube) - expected) / expected,
                        0.005)


class SkeletonVolumeTests(SimpleTestCase):
    """Test hull and analytic volumes."""

    def test_convex_profile_hull_matches_revolve(self):
        """Test a cylinder's hull volume equals its revolved volume."""
        _, hull_volume = skeleton_hull_volume(CYLINDER, 64)
        revolved = enclosed_volume(revolve(CYLINDER, 64))

        self.assertLess(abs(hull_volume - revolved) / revolved, 0.005)

    def test_waisted_profile_hull_overestimates(self):
        """Test the hull fills the waist."""
        comparison = compare_volumes(WAISTED, 64)

        self.assertGreater(comparison.hull_cm3, comparison.revolve_cm3)
        self.assertGreater(comparison.hull_overestimate_pct, 0)

    def test_analytic_frustum(self):
        """Test the frustum formula on a truncated cone."""
        skeleton = ProfileSkeleton.from_rings([(0, 10), (30, 20)])
        expected = math.pi * 30 * (100 + 200 + 400) / 3 / 1000

        self.assertAlmostEqual(analytic_volume(skeleton), expected,
                               places=12)

    def test_hull_never_below_revolve(self):
        """Test hull volume bounds revolve volume for random skeletons."""
        rng = np.random.default_rng(8)
        for _ in range(5):
            heights = np.cumsum(rng.uniform(5, 20, size=5))
            radii = rng.uniform(10, 40, size=5)
            skeleton = ProfileSkeleton.from_rings(zip(heights, radii))
            comparison = compare_volumes(skeleton, 64)
            self.assertGreaterEqual(comparison.hull_cm3,
                                    comparison.revolve_cm3 * 0.995)
