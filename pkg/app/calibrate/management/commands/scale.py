"""
Django command to scale a mesh from a reference distance.
"""

from calibrate.scaling import (
    UNIT_TO_MM,
    apply_scale,
    compute_factor,
    normalize_units,
)
from core.management.base import VesselCommand


class Command(VesselCommand):
    """Multiply coordinates by real distance / measured distance."""
    help = 'Scale a mesh so two reference points lie a known distance apart.'

    def add_command_arguments(self, parser):
        parser.add_argument('mesh')
        parser.add_argument('--point-a', nargs=3, type=float, required=True)
        parser.add_argument('--point-b', nargs=3, type=float, required=True)
        parser.add_argument('--real-distance', type=float, required=True,
                            help='True distance between the points in mm')
        parser.add_argument('--unit', default='mm', choices=['mm', 'cm', 'm'],
                            help='Unit the mesh and points are declared in')
        parser.add_argument('--recenter', action='store_true')
        parser.add_argument('--audit', help='Write the calibration as JSON')

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out is required')
        mesh = normalize_units(self.load(options['mesh']), options['unit'])
        unit = UNIT_TO_MM[options['unit']]
        calibration = compute_factor(
            [unit * x for x in options['point_a']],
            [unit * x for x in options['point_b']],
            options['real_distance'],
        )
        self.save(apply_scale(mesh, calibration, options['recenter']),
                  options['out'])
        self.emit(calibration.as_dict(), options['audit'])
        self.stdout.write(self.style.SUCCESS(
            f'Scale factor: {calibration.factor:.9g}'))
