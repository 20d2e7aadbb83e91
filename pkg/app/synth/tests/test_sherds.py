'''Test sheet splitting and wedge selection.'''

import numpy as np

from django.test import SimpleTestCase

from core.exceptions import EmptyResultError
from core.measure import hausdorff_distance
from register.alignment import ZAlignment
from register.shells import merge_shells
from synth.primitives import cylinder
from synth.sherds import arc_fraction, band_split, ring_indices, wedge
from synth.vessel import VesselProfile, generate_vessel


class BandSplitTest(SimpleTestCase):
    '''Test band_split on a double-walled cylinder sherd'''

    def setUp(self):
        vessel = generate_vessel(
            VesselProfile([(0, 50, 5), (50, 50, 5), (100, 50, 5)], 64))
        upper = vessel.mesh.submesh(vessel.mesh.face_centroids[:, 2] > 10)
        self.sherd = wedge(upper, 0.0, 90.0)

    def test_sheets_exclude_only_the_rim(self):
        '''Test inner plus outer plus rim faces is the whole sherd'''
        inner, outer = band_split(self.sherd)

        rim = np.sum(np.abs(self.sherd.face_normals[:, 2]) > 0.99)
        self.assertGreater(inner.triangle_count, 0)
        self.assertGreater(outer.triangle_count, 0)
        self.assertEqual(inner.triangle_count + outer.triangle_count,
                         self.sherd.triangle_count - rim)

    def test_sheet_radii(self):
        '''Test each sheet lies on its own wall'''
        inner, outer = band_split(self.sherd)

        self.assertTrue(np.allclose(np.hypot(*inner.vertices[:, :2].T), 45))
        self.assertTrue(np.allclose(np.hypot(*outer.vertices[:, :2].T), 50))

    def test_split_then_merge_round_trip(self):
        '''Test merging the sheets back covers the sherd vertices'''
        inner, outer = band_split(self.sherd)

        merged = merge_shells(inner, outer, ZAlignment(0.0, 0.0, 0.0))

        self.assertLess(hausdorff_distance(merged, self.sherd), 1e-9)

    def test_single_sheet_raises(self):
        '''Test a sherd with one wall has an empty side'''
        _, outer = band_split(self.sherd)

        with self.assertRaises(EmptyResultError):
            band_split(outer)


class SelectionTest(SimpleTestCase):
    '''Test wedge, ring and alignment helpers'''

    def test_wedge_covers_a_quarter(self):
        '''Test a 90 degree wedge spans a quarter turn'''
        mesh = cylinder(10.0, 20.0, 64, capped=False)

        part = wedge(mesh, 0.0, 90.0)

        self.assertEqual(part.triangle_count, mesh.triangle_count // 4)
        self.assertAlmostEqual(arc_fraction(part.vertices), 0.25, places=6)

    def test_ring_indices(self):
        '''Test the top ring of a cylinder is found'''
        mesh = cylinder(10.0, 20.0, 32, capped=False)

        indices = ring_indices(mesh, 20.0, 10.0)

        self.assertEqual(len(indices), 32)
        np.testing.assert_allclose(mesh.vertices[indices, 2], 20.0)

    def test_empty_wedge(self):
        '''Test a wedge with no faces is an error'''
        mesh = cylinder(10.0, 20.0, 4, capped=False)

        with self.assertRaises(EmptyResultError):
            wedge(mesh, 1.0, 1.0)
