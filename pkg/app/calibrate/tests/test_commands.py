'''Test the scale command.'''

import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.io import load_mesh, save_mesh
from core.measure import enclosed_volume
from synth.primitives import cube


class ScaleCommandTest(SimpleTestCase):
    '''Test scaling from the command line'''

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        self.source = self.root / 'cube.obj'
        save_mesh(cube(), self.source)

    def tearDown(self):
        self.tmp.cleanup()

    def test_scale_writes_mesh_and_audit(self):
        '''Test the scaled cube and its calibration audit'''
        out = self.root / 'scaled.ply'
        audit = self.root / 'calibration.json'

        call_command('scale', str(self.source),
                     '--point-a', '0', '0', '0', '--point-b', '1', '0', '0',
                     '--real-distance', '10', '--out', str(out),
                     '--audit', str(audit), stdout=StringIO())

        self.assertAlmostEqual(enclosed_volume(load_mesh(out)), 1.0)
        self.assertEqual(json.loads(audit.read_text())['factor'], 10.0)

    def test_coincident_points_fail(self):
        '''Test a zero-length reference exits with an error'''
        with self.assertRaises(CommandError):
            call_command('scale', str(self.source),
                         '--point-a', '0', '0', '0',
                         '--point-b', '0', '0', '0',
                         '--real-distance', '10',
                         '--out', str(self.root / 'x.ply'),
                         stdout=StringIO())
