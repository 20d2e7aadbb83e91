"""
Django command to engrave a text label into a closed mesh.
"""

from core.management.base import VesselCommand
from support.engrave import engrave_label
from support.management.commands.support import region_argument
from support.voxels import voxelize


class Command(VesselCommand):
    """Voxelize, cut the label in, and mesh the result again."""
    help = 'Engrave dot-matrix text into a closed mesh (A-Z 0-9 . -).'

    def add_command_arguments(self, parser):
        parser.add_argument('mesh')
        parser.add_argument('--text', required=True)
        parser.add_argument('--region', type=float, nargs=6, required=True,
                            metavar=('X0', 'Y0', 'Z0', 'X1', 'Y1', 'Z1'))
        parser.add_argument('--depth', type=float, default=None)
        parser.add_argument('--voxel', type=float, default=None)

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out is required')
        mesh = self.load(options['mesh'])
        solid = voxelize(mesh, options['voxel'])
        engraved = engrave_label(solid, options['text'],
                                 region_argument(options['region']),
                                 options['depth'])
        self.stdout.write(
            f'Removed {solid.count - engraved.count} voxels')
        self.save(engraved.to_mesh(), options['out'])
