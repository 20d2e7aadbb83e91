'''Test loading project files and their fragments.'''

import json
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from rest_framework.exceptions import ValidationError

from pipeline.project import load_project
from pipeline.tests.projects import quarter_sherd, rim_selections
from pipeline.tests.projects import write_project


class LoadProjectTest(SimpleTestCase):
    '''Test load_project and Project.load_fragment'''

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)
        _, self.sherd = quarter_sherd(32)

    def tearDown(self):
        self.tmp.cleanup()

    def test_paths_resolve_against_project(self):
        '''Test meshes and output sit next to the project file'''
        path = write_project(self.root, [{'task': 'volume'}],
                             {'sherd': (self.sherd, {})})

        project = load_project(path)

        self.assertEqual(project.output_dir, self.root / 'output')
        self.assertEqual(project.fragments[0].path, self.root / 'sherd.ply')
        self.assertEqual(project.tasks, [('volume',
                                          {'fix_orientation': False})])
        self.assertEqual(project.metadata['calculation_time'], '')

    def test_units_and_up_axis(self):
        '''Test centimetre meshes with Y up load as millimetres, Z up'''
        yup = self.sherd.transformed(
            np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]]),
            scale=0.1)
        calibration = {'point_a': [0, 0, 0], 'point_b': [0, 1, 0],
                       'real_distance_mm': 10.0}
        path = write_project(
            self.root, [{'task': 'volume'}],
            {'sherd': (yup, {'calibration': calibration,
                             'rims': rim_selections(self.sherd)})},
            units='cm', up_axis='y',
        )
        project = load_project(path)

        mesh, loaded, pose, rims = project.load_fragment(
            project.fragments[0])

        np.testing.assert_allclose(mesh.vertices, self.sherd.vertices,
                                   atol=1e-9)
        np.testing.assert_allclose(loaded.point_b, (0.0, 0.0, 10.0),
                                   atol=1e-12)
        self.assertAlmostEqual(loaded.factor, 1.0)
        self.assertIsNone(pose)
        self.assertEqual(len(rims), 3)
        np.testing.assert_allclose(rims[0][:, 2], 0.0, atol=1e-9)

    def test_rim_points_follow_units(self):
        '''Test explicit rim points are converted like the mesh'''
        path = write_project(
            self.root, [{'task': 'volume'}],
            {'sherd': (self.sherd,
                       {'rims': [{'points': [[1, 0, 0], [0, 1, 0],
                                             [-1, 0, 0]]}]})},
            units='cm',
        )
        project = load_project(path)

        _, _, _, rims = project.load_fragment(project.fragments[0])

        np.testing.assert_allclose(rims[0][0], (10.0, 0.0, 0.0))

    def test_rim_index_out_of_range(self):
        '''Test rim indices must exist in the mesh'''
        path = write_project(
            self.root, [{'task': 'volume'}],
            {'sherd': (self.sherd, {'rims': [{'indices': [0, 1, 10 ** 6]}]})},
        )
        project = load_project(path)

        with self.assertRaises(ValueError):
            project.load_fragment(project.fragments[0])

    def test_invalid_json(self):
        '''Test unreadable documents are reported'''
        path = self.root / 'broken.json'
        path.write_text('{"schema_version": 1,')

        with self.assertRaises(ValueError):
            load_project(path)

    def test_invalid_document(self):
        '''Test validation errors surface unchanged'''
        path = self.root / 'project.json'
        path.write_text(json.dumps({'schema_version': 1}))

        with self.assertRaises(ValidationError):
            load_project(path)
