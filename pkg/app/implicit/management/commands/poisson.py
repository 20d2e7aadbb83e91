"""
Django command to rebuild a vessel surface from posed fragments.
"""

from core.management.base import VesselCommand
from implicit.reconstruct import SHEETS, reconstruct_vessel


class Command(VesselCommand):
    """Poisson reconstruction and enclosed volume."""
    help = 'Reconstruct a closed vessel from posed fragment meshes.'
    uses_grid = True

    def add_command_arguments(self, parser):
        parser.add_argument('fragments', nargs='+')
        parser.add_argument('--padding', type=float, default=None)
        parser.add_argument('--k', type=int, default=None,
                            help='Neighbours used for normal estimation')
        parser.add_argument('--sheet', choices=SHEETS, default='all')
        parser.add_argument('--json', help='Write the solve report as JSON')
        parser.add_argument('--dump-grid',
                            help='Write the indicator grid as STEM.raw/.txt')

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out is required')
        fragments = [self.load(path) for path in options['fragments']]
        result = reconstruct_vessel(fragments, options['grid'],
                                    options['padding'], options['k'],
                                    options['sheet'])
        if not result.solution.converged:
            self.stdout.write(self.style.WARNING(
                'Conjugate gradient did not reach the tolerance'))
        self.save(result.mesh, options['out'])
        if options['dump_grid']:
            result.solution.grid.dump(options['dump_grid'])
        self.emit(result.as_dict(), options['json'])
        self.stdout.write(f'Volume: {result.volume_cm3:.6f} cm³')
