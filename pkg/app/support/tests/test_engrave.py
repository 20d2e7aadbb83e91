'''Test dot-matrix label engraving.'''

import numpy as np
from django.test import SimpleTestCase

from core.measure import diagnose
from support.engrave import FONT, engrave_label, render_text
from support.voxels import voxelize
from synth.primitives import box

# Top-face patch of the slab: 16 x 22 voxel centres, a 3 mm dot pitch.
REGION = ((7.0, 9.0, 9.0), (23.0, 31.0, 11.0))


class RenderTextTest(SimpleTestCase):
    '''Test rasterising label text'''

    def test_font_covers_charset(self):
        '''Test every supported character has a 5x7 glyph'''
        charset = 'ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .-'

        self.assertEqual(sorted(FONT), sorted(charset))
        for char, rows in FONT.items():
            self.assertEqual(len(rows), 7, char)
            self.assertTrue(all(len(row) == 5 for row in rows), char)

    def test_spacing(self):
        '''Test glyphs are separated by one blank column'''
        bitmap = render_text('AB')

        self.assertEqual(bitmap.shape, (7, 11))
        self.assertFalse(bitmap[:, 5].any())
        self.assertEqual(int(render_text('A').sum()), 18)

    def test_unsupported_characters(self):
        '''Test lower case and punctuation outside the font are refused'''
        with self.assertRaises(ValueError):
            render_text('Gr1C')
        with self.assertRaises(ValueError):
            render_text('A/B')

    def test_empty_text(self):
        '''Test empty text is refused'''
        with self.assertRaises(ValueError):
            render_text('')


class EngraveLabelTest(SimpleTestCase):
    '''Test cutting labels into voxel solids'''

    def setUp(self):
        self.slab = voxelize(box((30.0, 40.0, 10.0)), 1.0)

    def test_count_difference(self):
        '''Test the removed voxels are dots x dot area x depth layers'''
        engraved = engrave_label(self.slab, 'A', REGION, depth=3.0)

        expected = 18 * 3 * 3 * 3
        removed = self.slab.count - engraved.count
        self.assertAlmostEqual(removed, expected, delta=0.1 * expected)

    def test_carved_on_top_face(self):
        '''Test the carving stays under the patch and within the depth'''
        engraved = engrave_label(self.slab, 'A', REGION, depth=3.0)

        carved = self.slab.occupied & ~engraved.occupied
        heights = self.slab.centres()[carved][:, 2]
        np.testing.assert_allclose(sorted(set(heights)), [7.5, 8.5, 9.5])

    def test_region_off_surface(self):
        '''Test a region that misses the surface is refused'''
        region = ((100.0, 100.0, 100.0), (110.0, 110.0, 110.0))

        with self.assertRaises(ValueError):
            engrave_label(self.slab, 'A', region, depth=2.0)

    def test_region_too_small(self):
        '''Test glyphs need at least three voxels per dot'''
        region = ((10.0, 10.0, 9.0), (16.0, 20.0, 11.0))

        with self.assertRaisesRegex(ValueError, 'too small'):
            engrave_label(self.slab, 'A', region, depth=2.0)

    def test_depth_below_voxel(self):
        '''Test the depth must cover at least one voxel'''
        with self.assertRaises(ValueError):
            engrave_label(self.slab, 'A', REGION, depth=0.5)

    def test_still_watertight(self):
        '''Test the engraved solid meshes to a closed surface'''
        engraved = engrave_label(self.slab, 'A', REGION, depth=2.0)

        mesh = engraved.to_mesh()
        self.assertTrue(diagnose(mesh).is_watertight)
