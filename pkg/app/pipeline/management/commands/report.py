"""
Django command to render the metrics report.
"""

import json
from pathlib import Path

from core.management.base import VesselCommand
from core.models import MetricsRecord
from pipeline.report import MetricsRow, render_csv, render_table
from pipeline.serializers import MetricsRecordSerializer

RENDERERS = {'csv': render_csv, 'table': render_table}


class Command(VesselCommand):
    """Render a run's metrics.json, or the whole registry."""
    help = 'Print the metrics report as CSV or as an aligned text table.'

    def add_command_arguments(self, parser):
        parser.add_argument('--metrics',
                            help='metrics.json written by run; default is '
                                 'the registry')
        parser.add_argument('--format', choices=sorted(RENDERERS),
                            default='table')
        parser.add_argument('--decimals', type=int, default=None,
                            help='Volume decimals')

    def run(self, **options):
        if options['metrics']:
            data = json.loads(Path(options['metrics']).read_text())
        else:
            data = MetricsRecordSerializer(
                MetricsRecord.objects.all(), many=True).data
        rows = [MetricsRow.from_dict(item) for item in data]
        text = RENDERERS[options['format']](rows, options['decimals'])
        if options['out']:
            Path(options['out']).parent.mkdir(parents=True, exist_ok=True)
            Path(options['out']).write_text(text)
            self.stdout.write(self.style.SUCCESS(f"Wrote {options['out']}"))
        else:
            self.stdout.write(text, ending='')
