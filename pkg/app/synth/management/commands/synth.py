"""
Django command to generate a synthetic vessel scenario.
"""

from core.management.base import VesselCommand
from synth.scenario import MANIFEST, read_scenario, run_scenario


class Command(VesselCommand):
    """Write vessel, cavity and sherd meshes plus manifest.json."""
    help = 'Generate a synthetic vessel and its sherds from a scenario file.'
    uses_seed = True

    def add_command_arguments(self, parser):
        parser.add_argument('scenario', help='Scenario JSON file')

    def run(self, **options):
        if not options['out']:
            raise ValueError('--out is required')
        manifest = run_scenario(read_scenario(options['scenario']),
                                options['out'], options['seed'])
        self.stdout.write(self.style.SUCCESS(
            f"Wrote {len(manifest['sherds'])} sherds and {MANIFEST} "
            f"to {options['out']}"))
