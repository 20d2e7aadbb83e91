"""
Django command to split a mesh into printable parts.
"""

from pathlib import Path

from core.management.base import VesselCommand
from core.measure import enclosed_volume
from support.split import SEAM_AXES, split_for_build


class Command(VesselCommand):
    """Cut a closed mesh so every part fits the build volume."""
    help = 'Split a mesh into parts that fit the printer build volume.'

    def add_command_arguments(self, parser):
        parser.add_argument('mesh')
        parser.add_argument('--build', type=float, nargs=3, default=None,
                            metavar=('X', 'Y', 'Z'),
                            help='Build volume in mm')
        parser.add_argument('--margin', type=float, default=None)
        parser.add_argument('--seam-axis', choices=SEAM_AXES,
                            default='auto')

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out DIR is required')
        mesh = self.load(options['mesh'])
        parts = split_for_build(mesh, options['build'],
                                options['seam_axis'], options['margin'])
        out = Path(options['out'])
        stem = Path(options['mesh']).stem
        for index, part in enumerate(parts, start=1):
            self.save(part, out / f'{stem}-part-{index:02d}.stl')
            self.stdout.write(
                f'Part {index}: {part.triangle_count} triangles, '
                f'{enclosed_volume(part):.3f} cm³')
