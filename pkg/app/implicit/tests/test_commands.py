'''Test the poisson command.'''

import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.io import load_mesh, save_mesh
from core.measure import diagnose
from implicit.grid import ScalarGrid
from implicit.tests.clouds import SPHERE_CM3
from synth.primitives import icosphere


class PoissonCommandTest(SimpleTestCase):
    '''Test reconstruction from the command line'''

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        self.fragment = self.root / 'sphere.ply'
        save_mesh(icosphere(10.0, 4), self.fragment)

    def tearDown(self):
        self.tmp.cleanup()

    def test_writes_mesh_report_and_grid(self):
        '''Test every requested output is written'''
        out = self.root / 'rebuilt.ply'
        report = self.root / 'poisson.json'
        stem = self.root / 'chi'

        call_command('poisson', str(self.fragment), grid=40, out=str(out),
                     json=str(report), dump_grid=str(stem),
                     stdout=StringIO())

        data = json.loads(report.read_text())
        self.assertTrue(diagnose(load_mesh(out)).is_watertight)
        self.assertAlmostEqual(data['volume_cm3'], SPHERE_CM3,
                               delta=0.1 * SPHERE_CM3)
        self.assertTrue(data['converged'])
        self.assertEqual(ScalarGrid.load(stem).dims, (40, 40, 40))

    def test_out_is_required(self):
        '''Test the command refuses to run without --out'''
        with self.assertRaises(CommandError):
            call_command('poisson', str(self.fragment), stdout=StringIO())
