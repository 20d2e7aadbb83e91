"""
Django command for the convex hull volume of a skeleton.
"""

from core.management.base import VesselCommand
from skeleton.profile import read_skeleton_csv
from skeleton.revolution import compare_volumes, skeleton_hull_volume


class Command(VesselCommand):
    """Report hull, revolve and analytic volumes of a skeleton."""
    help = 'Hull the skeleton rings and compare volumes (cm³).'
    uses_segments = True

    def add_command_arguments(self, parser):
        parser.add_argument('skeleton')
        parser.add_argument('--json', help='Write the comparison as JSON')

    def run(self, **options):
        skeleton = read_skeleton_csv(options['skeleton'])
        if options['out']:
            hull, _ = skeleton_hull_volume(skeleton, options['segments'])
            self.save(hull, options['out'])
        comparison = compare_volumes(skeleton, options['segments'])
        self.emit(comparison.as_dict(), options['json'])
        if not skeleton.bottom_closed:
            self.stdout.write(self.style.WARNING(
                'The base is closed by assumption, not observed'))
        self.stdout.write(self.style.SUCCESS(
            f'Hull volume: {comparison.hull_cm3:.3f} cm³ '
            f'(+{comparison.hull_overestimate_pct:.2f}% over revolve)'))
