"""
Django command to stack fitted circles into a profile skeleton.
"""

import json
from pathlib import Path

from core.management.base import VesselCommand
from skeleton.circles import Circle3D
from skeleton.profile import build_skeleton, write_skeleton_csv


def read_circle(path):
    data = json.loads(Path(path).read_text())
    return Circle3D(data['center'], data['radius'], data['normal'])


class Command(VesselCommand):
    """Build a skeleton from circle JSON files written by fit_rim."""
    help = 'Stack coaxial circles into a height/radius skeleton CSV.'

    def add_command_arguments(self, parser):
        parser.add_argument('circles', nargs='+')
        parser.add_argument('--open-bottom', action='store_true',
                            help='The lowest ring is not an observed base')

    def run(self, **options):
        circles = [read_circle(path) for path in options['circles']]
        skeleton = build_skeleton(circles,
                                  bottom_closed=not options['open_bottom'])
        if options['out']:
            write_skeleton_csv(skeleton, options['out'])
            self.stdout.write(self.style.SUCCESS(f"Wrote {options['out']}"))
        self.emit(skeleton.as_dict())
