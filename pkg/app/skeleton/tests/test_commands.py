'''Test the skeleton commands end to end.'''

import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from core.io import load_mesh
from core.measure import diagnose


class SkeletonCommandsTest(SimpleTestCase):
    '''Test fit_rim, skeleton, revolve and hull_volume'''

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def rim(self, name, height, radius):
        angles = np.linspace(0.0, np.pi / 2, 12)
        points = np.column_stack([radius * np.cos(angles),
                                  radius * np.sin(angles),
                                  np.full(12, height)])
        path = self.root / f'{name}.json'
        path.write_text(json.dumps(points.tolist()))
        return path

    def test_rim_to_revolved_mesh(self):
        '''Test the command chain produces a closed vessel'''
        circles = []
        for name, height, radius in (('base', 0, 30), ('belly', 40, 45),
                                     ('lip', 80, 35)):
            out = self.root / f'{name}.circle.json'
            call_command('fit_rim', points=str(self.rim(name, height,
                                                        radius)),
                         out=str(out), stdout=StringIO())
            circles.append(str(out))
        skeleton_csv = self.root / 'skeleton.csv'
        mesh_path = self.root / 'vessel.ply'
        report = self.root / 'volumes.json'

        call_command('skeleton', *circles, out=str(skeleton_csv),
                     stdout=StringIO())
        call_command('revolve', str(skeleton_csv), out=str(mesh_path),
                     segments=64, stdout=StringIO())
        call_command('hull_volume', str(skeleton_csv), json=str(report),
                     segments=64, stdout=StringIO())

        self.assertTrue(diagnose(load_mesh(mesh_path)).is_watertight)
        volumes = json.loads(report.read_text())
        self.assertGreater(volumes['hull_volume_cm3'],
                           volumes['revolve_volume_cm3'] * 0.995)

    def test_fit_rim_without_selection_fails(self):
        '''Test a missing selection exits with an error'''
        with self.assertRaises(CommandError):
            call_command('fit_rim', stdout=StringIO())
