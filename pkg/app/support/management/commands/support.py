"""
Django command to build a 3D-printable display support.
"""

from pathlib import Path

from core.management.base import VesselCommand
from support.support import SupportSpec, make_support


def region_argument(values):
    if values is None:
        return None
    return (tuple(values[:3]), tuple(values[3:]))


class Command(VesselCommand):
    """Shell the vessel, recess the fragments and engrave a label."""
    help = 'Generate a display support (binary STL) for posed fragments.'

    def add_command_arguments(self, parser):
        parser.add_argument('vessel')
        parser.add_argument('fragments', nargs='*')
        parser.add_argument('--shell', type=float, default=None,
                            help='Shell thickness in mm')
        parser.add_argument('--clearance', type=float, default=None)
        parser.add_argument('--voxel', type=float, default=None)
        parser.add_argument('--label', default='')
        parser.add_argument('--label-region', type=float, nargs=6,
                            metavar=('X0', 'Y0', 'Z0', 'X1', 'Y1', 'Z1'))
        parser.add_argument('--label-depth', type=float, default=None)
        parser.add_argument('--report',
                            help='Protrusion CSV path (fragment_id,'
                                 'max_protrusion_mm)')
        parser.add_argument('--json', help='Write the support summary')

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out is required')
        spec = SupportSpec(
            shell_thickness=options['shell'],
            clearance=options['clearance'],
            voxel_size=options['voxel'],
            label_text=options['label'],
            label_depth=options['label_depth'],
            label_region=region_argument(options['label_region']),
        )
        vessel = self.load(options['vessel'])
        fragments = [self.load(path) for path in options['fragments']]
        ids = [Path(path).stem for path in options['fragments']]
        result = make_support(vessel, fragments, spec, ids)
        self.save(result.mesh, options['out'])
        if options['report']:
            report = Path(options['report'])
            report.parent.mkdir(parents=True, exist_ok=True)
            report.write_text(result.protrusion_csv())
            self.stdout.write(self.style.SUCCESS(f'Wrote {report}'))
        summary = result.as_dict()
        summary['spec'] = spec.as_dict()
        self.emit(summary, options['json'])
