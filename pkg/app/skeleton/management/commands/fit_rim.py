"""
Django command to fit a circle to a rim selection.
"""

import json
from pathlib import Path

import numpy as np

from core.management.base import VesselCommand
from skeleton.circles import fit_circle


class Command(VesselCommand):
    """Fit a rim circle to picked vertices or explicit coordinates."""
    help = 'Fit a 3D circle to a rim selection and print it as JSON.'

    def add_command_arguments(self, parser):
        parser.add_argument('mesh', nargs='?',
                            help='Mesh the vertex indices refer to')
        parser.add_argument('--indices',
                            help='Comma separated vertex indices')
        parser.add_argument('--points',
                            help='JSON file holding a list of [x, y, z]')
        parser.add_argument('--algebraic', action='store_true',
                            help='Skip the geometric refinement')

    def run(self, **options):
        if options['points']:
            points = np.array(json.loads(Path(options['points']).read_text()),
                              dtype=float)
        elif options['indices'] and options['mesh']:
            mesh = self.load(options['mesh'])
            indices = [int(i) for i in options['indices'].split(',') if i]
            if min(indices) < 0 or max(indices) >= mesh.vertex_count:
                raise ValueError('Rim vertex index out of range')
            points = mesh.vertices[indices]
        else:
            raise ValueError('Give --points, or a mesh with --indices')
        fit = fit_circle(points, refine=not options['algebraic'])
        if fit.refinement_failed:
            self.stdout.write(self.style.WARNING(
                'Refinement diverged; reporting the algebraic circle'))
        self.emit(fit.as_dict(), options['out'])
