"""
Django command to run a project file end to end.
"""

from pathlib import Path

from django.db import transaction

from core.management.base import VesselCommand
from core.models import MetricsRecord
from pipeline.project import load_project
from pipeline.report import render_table
from pipeline.runner import PipelineRunner


class Command(VesselCommand):
    """Validate a project, execute its tasks and print the report."""
    help = 'Run the task list of a project file and write its artifacts.'
    uses_grid = True
    uses_segments = True

    def add_command_arguments(self, parser):
        parser.add_argument('project', help='Project JSON file')
        parser.add_argument('--record', action='store_true',
                            help='Store the metrics rows in the registry')
        parser.add_argument('--timings', action='store_true',
                            help='Also write timings.csv (not reproducible)')

    def run(self, **options):
        project = load_project(options['project'])
        runner = PipelineRunner(project, options['out'], options['grid'],
                                options['segments'])
        rows = runner.run()
        self.stdout.write(render_table(rows), ending='')
        if options['timings']:
            path = Path(runner.out_dir) / 'timings.csv'
            path.write_text(runner.timings_csv())
        if options['record']:
            if not rows:
                self.stdout.write(self.style.WARNING(
                    'Nothing to record: no volume task ran'))
            with transaction.atomic():
                for row in rows:
                    data = row.as_dict()
                    MetricsRecord.objects.record(
                        data.pop('name'), data.pop('volume_cm3'), **data)
        self.stdout.write(self.style.SUCCESS(
            f'Project {project.name}: {len(project.tasks)} tasks, '
            f'artifacts in {runner.out_dir}'))
