"""
Django command to refine a fragment pose with ICP.
"""

import json
from pathlib import Path

from core.management.base import VesselCommand
from register.icp import icp_rigid
from register.transforms import RigidTransform


class Command(VesselCommand):
    """Register moving onto fixed from a seed pose."""
    help = 'Refine the rigid pose of a fragment against a reference mesh.'

    def add_command_arguments(self, parser):
        parser.add_argument('moving')
        parser.add_argument('fixed')
        parser.add_argument('--seed-pose',
                            help='JSON pose block used as the start')
        parser.add_argument('--max-iterations', type=int, default=None)
        parser.add_argument('--pose-out', help='Write the pose as JSON')

    def run(self, **options):
        moving = self.load(options['moving'])
        fixed = self.load(options['fixed'])
        seed = None
        if options['seed_pose']:
            seed = RigidTransform.from_dict(
                json.loads(Path(options['seed_pose']).read_text()))
        result = icp_rigid(moving, fixed, seed, options['max_iterations'])
        if options['out']:
            self.save(result.transform.apply_mesh(moving), options['out'])
        self.emit(result.as_dict(), options['pose_out'])
        self.stdout.write(self.style.SUCCESS(
            f'ICP rms {result.rms:.4g} mm after {result.iterations} '
            'iterations'))
