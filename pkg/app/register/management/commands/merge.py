"""
Django command to merge an inner shell into an outer shell.
"""

import json
from pathlib import Path

from calibrate.scaling import ScaleCalibration, check_consistent
from core.management.base import VesselCommand
from register.alignment import ZAlignment
from register.shells import merge_shells


def read_calibration(path):
    data = json.loads(Path(path).read_text())
    return ScaleCalibration(data['point_a'], data['point_b'],
                            data.get('real_distance_mm',
                                     data.get('real_distance')))


class Command(VesselCommand):
    """Apply an align_z result to the inner shell and concatenate."""
    help = 'Merge inner and outer shells using a Z alignment.'

    def add_command_arguments(self, parser):
        parser.add_argument('inner')
        parser.add_argument('outer')
        parser.add_argument('--alignment', required=True,
                            help='JSON written by align_z')
        parser.add_argument('--inner-calibration', required=True)
        parser.add_argument('--outer-calibration', required=True)

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out is required')
        check_consistent(read_calibration(options['inner_calibration']),
                         read_calibration(options['outer_calibration']))
        data = json.loads(Path(options['alignment']).read_text())
        alignment = ZAlignment(data['theta_rad'], data['dz_mm'],
                               data.get('mean_residual_mm', 0.0))
        merged = merge_shells(self.load(options['inner']),
                              self.load(options['outer']), alignment)
        self.save(merged, options['out'])
