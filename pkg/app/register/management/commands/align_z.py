"""
Django command to align a shell onto another by Z rotation and slide.
"""

import csv
import math
from pathlib import Path

from core.management.base import VesselCommand
from register.alignment import OBJECTIVES, align_z


class Command(VesselCommand):
    """Grid-search theta and dz, then refine."""
    help = 'Align moving onto fixed by a rotation about Z and a Z slide.'

    def add_command_arguments(self, parser):
        parser.add_argument('moving')
        parser.add_argument('fixed')
        parser.add_argument('--theta-steps', type=int, default=None)
        parser.add_argument('--dz-range', nargs=2, type=float, default=None,
                            metavar=('LOW', 'HIGH'))
        parser.add_argument('--dz-steps', type=int, default=None)
        parser.add_argument('--objective', choices=OBJECTIVES,
                            default='mean')
        parser.add_argument('--residual-grid',
                            help='Write every searched residual as CSV')

    def run(self, **options):
        moving = self.load(options['moving'])
        fixed = self.load(options['fixed'])
        alignment = align_z(moving, fixed, options['theta_steps'],
                            options['dz_range'], options['dz_steps'],
                            options['objective'])
        if alignment.degenerate:
            self.stdout.write(self.style.WARNING(
                'Residual is flat in theta; the rotation is unidentifiable'))
        if options['residual_grid']:
            self.write_grid(alignment, options['residual_grid'])
        self.emit(alignment.as_dict(), options['out'])

    def write_grid(self, alignment, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', newline='') as handle:
            writer = csv.writer(handle, lineterminator='\n')
            writer.writerow(['theta_deg', 'dz_mm', 'residual_mm'])
            for i, theta in enumerate(alignment.thetas):
                for j, dz in enumerate(alignment.dzs):
                    writer.writerow(['%.6f' % math.degrees(theta),
                                     '%.6f' % dz,
                                     '%.9g' % alignment.residuals[i, j]])
