"""
Django command to crop a fragment with an axis-aligned box.
"""

from core.management.base import VesselCommand
from pipeline.edits import KEEP, crop_fragment


class Command(VesselCommand):
    """Keep the triangles inside or outside a box."""
    help = 'Crop a mesh by triangle centroid against an axis-aligned box.'

    def add_command_arguments(self, parser):
        parser.add_argument('mesh')
        parser.add_argument('--box', type=float, nargs=6, required=True,
                            metavar=('X0', 'Y0', 'Z0', 'X1', 'Y1', 'Z1'))
        parser.add_argument('--keep', choices=KEEP, default='inside')

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out is required')
        mesh = self.load(options['mesh'])
        box = (options['box'][:3], options['box'][3:])
        cropped = crop_fragment(mesh, box, options['keep'])
        self.stdout.write(f'Kept {cropped.triangle_count} of '
                          f'{mesh.triangle_count} triangles')
        self.save(cropped, options['out'])
