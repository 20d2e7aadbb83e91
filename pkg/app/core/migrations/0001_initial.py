# Generated by Django 4.2.11 on 2024-04-02 10:12

import django.core.validators
from decimal import Decimal
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='MetricsRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('name', models.CharField(max_length=255, unique=True)),
                ('photo_count', models.PositiveIntegerField(blank=True, null=True)),
                ('point_count', models.PositiveIntegerField(blank=True, null=True)),
                ('surface_count', models.PositiveIntegerField()),
                ('vertex_count', models.PositiveIntegerField()),
                ('calculation_time', models.CharField(blank=True, max_length=64)),
                ('volume_cm3', models.DecimalField(decimal_places=3, max_digits=12, validators=[django.core.validators.MinValueValidator(Decimal('0'))])),
                ('hull_overestimate_pct', models.FloatField(blank=True, null=True)),
                ('updated', models.DateTimeField(auto_now=True)),
            ],
            options={
                'ordering': ['name'],
            },
        ),
        migrations.AddConstraint(
            model_name='metricsrecord',
            constraint=models.CheckConstraint(check=models.Q(('volume_cm3__gte', 0)), name='metrics_volume_non_negative'),
        ),
    ]
