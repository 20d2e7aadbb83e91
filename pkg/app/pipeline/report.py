"""
The per-vessel metrics report, as CSV or as an aligned text table.
"""

import csv
import io
from dataclasses import dataclass, fields
from decimal import ROUND_HALF_EVEN, Decimal

from core.conf import or_setting

COLUMNS = (
    'Ceramic name',
    'Number of photos',
    'Number of points (point cloud)',
    'Number of surfaces',
    'Number of vertices',
    'Calculation time',
    'Volume (cm³)',
    'Hull volume (cm³)',
    'Hull overestimate (%)',
)

LOCALE_NOTE = ('# Decimal separator is "."; volumes in cm³; calculation '
               'time is the declared photogrammetry time.')


def as_decimal(value):
    if value is None or value == '':
        return None
    if isinstance(value, Decimal):
        return value
    return Decimal(repr(float(value)))


def quantize(value, decimals):
    return value.quantize(Decimal(1).scaleb(-decimals),
                          rounding=ROUND_HALF_EVEN)


@dataclass(frozen=True)
class MetricsRow:
    """One reconstructed vessel of the report."""
    name: str
    photo_count: int = None
    point_count: int = None
    surface_count: int = None
    vertex_count: int = None
    calculation_time: str = ''
    volume_cm3: Decimal = None
    hull_volume_cm3: Decimal = None
    hull_overestimate_pct: float = None

    def __post_init__(self):
        if not self.name:
            raise ValueError('Metrics rows need a ceramic name')
        object.__setattr__(self, 'volume_cm3', as_decimal(self.volume_cm3))
        object.__setattr__(self, 'hull_volume_cm3',
                           as_decimal(self.hull_volume_cm3))
        object.__setattr__(self, 'calculation_time',
                           self.calculation_time or '')

    @classmethod
    def from_dict(cls, data):
        """Build a row from a metrics.json entry or serializer output."""
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    @classmethod
    def from_record(cls, record):
        return cls.from_dict({f.name: getattr(record, f.name)
                              for f in fields(cls)})

    def as_dict(self):
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        if self.volume_cm3 is not None:
            data['volume_cm3'] = float(self.volume_cm3)
        if self.hull_volume_cm3 is not None:
            data['hull_volume_cm3'] = float(self.hull_volume_cm3)
        return data

    def cells(self, decimals=None):
        decimals = or_setting(decimals, 'REPORT_VOLUME_DECIMALS')

        def count(value):
            return '' if value is None else str(int(value))

        def volume(value):
            return '' if value is None else str(quantize(value, decimals))

        gap = ('' if self.hull_overestimate_pct is None
               else f'{self.hull_overestimate_pct:.2f}')
        return [
            self.name,
            count(self.photo_count),
            count(self.point_count),
            count(self.surface_count),
            count(self.vertex_count),
            self.calculation_time,
            volume(self.volume_cm3),
            volume(self.hull_volume_cm3),
            gap,
        ]


def render_csv(rows, decimals=None):
    """CSV with the locale note, the header and one line per vessel."""
    buffer = io.StringIO()
    buffer.write(LOCALE_NOTE + '\n')
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.cells(decimals))
    return buffer.getvalue()


def render_table(rows, decimals=None):
    """Aligned plain-text table; the name column is left aligned."""
    body = [row.cells(decimals) for row in rows]
    widths = [max([len(title)] + [len(cells[i]) for cells in body])
              for i, title in enumerate(COLUMNS)]

    def line(cells):
        parts = [cells[0].ljust(widths[0])]
        parts += [cell.rjust(width)
                  for cell, width in zip(cells[1:], widths[1:])]
        return '  '.join(parts).rstrip()

    lines = [LOCALE_NOTE, line(COLUMNS),
             '  '.join('-' * width for width in widths)]
    lines += [line(cells) for cells in body]
    return '\n'.join(lines) + '\n'
