"""
Shared plumbing for the toolkit's management commands.
"""

import json
import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from rest_framework import serializers

from core.exceptions import VesselError
from core.io import load_mesh, save_mesh


class VesselCommand(BaseCommand):
    """
    Base command that adds the toolkit's common flags.

    Subclasses implement add_command_arguments() and run(**options).
    Library errors surface as CommandError so the process exits non-zero.
    """
    uses_seed = False
    uses_grid = False
    uses_segments = False

    def add_arguments(self, parser):
        parser.add_argument('--out', help='Output file or directory')
        parser.add_argument(
            '--verbose',
            action='store_true',
            help='Log toolkit internals at DEBUG level',
        )
        if self.uses_seed:
            parser.add_argument('--seed', type=int, default=None,
                                help='Random seed; defaults to the file')
        if self.uses_grid:
            parser.add_argument('--grid', type=int, default=None,
                                help='Grid resolution per axis')
        if self.uses_segments:
            parser.add_argument('--segments', type=int, default=None,
                                help='Angular segments of revolved surfaces')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        if options.get('verbose'):
            for name in settings.PROJECT_LOGGERS:
                logging.getLogger(name).setLevel(logging.DEBUG)
        try:
            self.run(**options)
        except (VesselError, ValueError, OSError,
                serializers.ValidationError) as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}') from exc

    def run(self, **options):
        raise NotImplementedError

    def load(self, path):
        mesh = load_mesh(path)
        self.stdout.write(f'Loaded {path}: {mesh.vertex_count} vertices, '
                          f'{mesh.triangle_count} triangles')
        return mesh

    def save(self, mesh, path):
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        save_mesh(mesh, path)
        self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))

    def emit(self, data, path=None):
        """Print data as JSON, and also write it to path when given."""
        text = json.dumps(data, indent=2, sort_keys=True)
        if path:
            Path(path).parent.mkdir(parents=True, exist_ok=True)
            Path(path).write_text(text + '\n')
            self.stdout.write(self.style.SUCCESS(f'Wrote {path}'))
        else:
            self.stdout.write(text)
