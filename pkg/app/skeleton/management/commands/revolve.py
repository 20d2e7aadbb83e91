"""
Django command to revolve a skeleton into a closed mesh.
"""

from core.management.base import VesselCommand
from skeleton.profile import read_skeleton_csv
from skeleton.revolution import revolve


class Command(VesselCommand):
    """Write the surface of revolution through a skeleton CSV."""
    help = 'Revolve a skeleton CSV into a watertight mesh.'
    uses_segments = True

    def add_command_arguments(self, parser):
        parser.add_argument('skeleton')

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out is required')
        skeleton = read_skeleton_csv(options['skeleton'])
        self.save(revolve(skeleton, options['segments']), options['out'])
