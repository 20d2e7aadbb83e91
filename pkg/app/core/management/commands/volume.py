"""
Django command to measure the volume enclosed by a mesh.
"""

from core.management.base import VesselCommand
from core.measure import diagnose, enclosed_volume, orient_fix


class Command(VesselCommand):
    """Print diagnostics and the enclosed volume in cm³."""
    help = 'Diagnose a mesh and report its enclosed volume in cm³.'

    def add_command_arguments(self, parser):
        parser.add_argument('mesh')
        parser.add_argument('--weld-tolerance', type=float, default=None)
        parser.add_argument(
            '--fix-orientation',
            action='store_true',
            help='Make windings consistent and outward before measuring',
        )

    def run(self, **options):
        mesh = self.load(options['mesh'])
        if options['fix_orientation']:
            mesh = orient_fix(mesh)
        diagnostics = diagnose(mesh, options['weld_tolerance'])
        volume = enclosed_volume(mesh, options['weld_tolerance'])
        result = diagnostics.as_dict()
        result['volume_cm3'] = volume
        self.emit(result, options['out'])
        self.stdout.write(self.style.SUCCESS(f'Volume: {volume:.6f} cm³'))
