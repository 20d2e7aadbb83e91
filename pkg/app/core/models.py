'''Our DB Models'''

from decimal import Decimal, ROUND_HALF_EVEN

from django.core.validators import MinValueValidator
from django.db import models


def thousandths(value):
    """Round a cm³ value half-even to the stored three decimals."""
    return Decimal(repr(float(value))).quantize(Decimal('0.001'),
                                                 rounding=ROUND_HALF_EVEN)


class MetricsRecordManager(models.Manager):
    """Manager for the vessel metrics registry."""

    def record(self, name, volume_cm3, **fields):
        """Create or update, save and return the row named name."""
        if not name:
            raise ValueError("Metrics records need a ceramic name")
        if volume_cm3 is None or volume_cm3 < 0:
            raise ValueError("Volume must be a non-negative number")
        if fields.get('hull_volume_cm3') is not None:
            fields['hull_volume_cm3'] = thousandths(fields['hull_volume_cm3'])
        row, _ = self.update_or_create(
            name=name,
            defaults={'volume_cm3': thousandths(volume_cm3), **fields},
        )
        return row


class MetricsRecord(models.Model):
    """One reconstructed ceramic in the metrics table."""
    name = models.CharField(max_length=255, unique=True)
    photo_count = models.PositiveIntegerField(null=True, blank=True)
    point_count = models.PositiveIntegerField(null=True, blank=True)
    surface_count = models.PositiveIntegerField()
    vertex_count = models.PositiveIntegerField()
    calculation_time = models.CharField(max_length=64, blank=True)
    volume_cm3 = models.DecimalField(
        max_digits=12,
        decimal_places=3,
        validators=[MinValueValidator(Decimal('0'))],
    )
    hull_volume_cm3 = models.DecimalField(
        max_digits=12,
        decimal_places=3,
        null=True,
        blank=True,
    )
    hull_overestimate_pct = models.FloatField(null=True, blank=True)
    updated = models.DateTimeField(auto_now=True)

    objects = MetricsRecordManager()

    class Meta:
        ordering = ['name']
        constraints = [
            models.CheckConstraint(
                check=models.Q(volume_cm3__gte=0),
                name='metrics_volume_non_negative',
            ),
        ]

    def __str__(self):
        return self.name
