'''Test rigid transforms.'''

import math

import numpy as np

from django.test import SimpleTestCase

from register.transforms import RigidTransform, nearest_rotation


class RigidTransformTest(SimpleTestCase):
    '''Test pose arithmetic'''

    def test_about_z_rotates_and_slides(self):
        '''Test a quarter turn about Z with a slide'''
        pose = RigidTransform.about_z(math.pi / 2, 3.0)

        moved = pose.apply([[1.0, 0.0, 0.0]])

        np.testing.assert_allclose(moved, [[0.0, 1.0, 3.0]], atol=1e-12)

    def test_compose_applies_right_operand_first(self):
        '''Test compose order'''
        turn = RigidTransform.about_z(math.pi / 2)
        shift = RigidTransform(np.eye(3), [1.0, 0.0, 0.0])

        moved = turn.compose(shift).apply([[0.0, 0.0, 0.0]])

        np.testing.assert_allclose(moved, [[0.0, 1.0, 0.0]], atol=1e-12)

    def test_inverse_undoes_pose(self):
        '''Test a pose followed by its inverse is the identity'''
        pose = RigidTransform.from_rotvec([0.2, -0.4, 0.9], [5.0, -2.0, 1.0])
        points = np.random.default_rng(3).normal(size=(20, 3))

        back = pose.inverse().apply(pose.apply(points))

        np.testing.assert_allclose(back, points, atol=1e-10)

    def test_dict_round_trip_keeps_pose(self):
        '''Test a pose survives its JSON block'''
        pose = RigidTransform.from_rotvec([0.1, 0.2, 0.3], [1.0, 2.0, 3.0])

        angle, gap = pose.difference(RigidTransform.from_dict(pose.as_dict()))

        self.assertLess(angle, 1e-9)
        self.assertLess(gap, 1e-9)

    def test_reflection_is_rejected(self):
        '''Test a mirror matrix is not a valid rotation'''
        with self.assertRaises(ValueError):
            RigidTransform(np.diag([1.0, 1.0, -1.0]), np.zeros(3))

    def test_nearest_rotation_repairs_drift(self):
        '''Test a slightly perturbed rotation is projected back'''
        drifted = np.eye(3) + 1e-4 * np.arange(9).reshape(3, 3)

        rotation = nearest_rotation(drifted)

        np.testing.assert_allclose(rotation @ rotation.T, np.eye(3),
                                   atol=1e-12)
        self.assertAlmostEqual(np.linalg.det(rotation), 1.0)

    def test_angle_of_about_z(self):
        '''Test the reported rotation angle'''
        self.assertAlmostEqual(RigidTransform.about_z(0.7).angle, 0.7)
