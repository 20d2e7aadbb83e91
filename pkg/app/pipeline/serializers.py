"""
Serializers for project files and metrics rows.
"""

from pathlib import Path

from rest_framework import serializers

from calibrate.scaling import UNIT_TO_MM
from core.models import MetricsRecord
from implicit.reconstruct import SHEETS
from register.alignment import OBJECTIVES
from support.split import SEAM_AXES

SCHEMA_VERSION = 1
UP_AXES = ('x', 'y', 'z', '-x', '-y', '-z')


def point_field(**kwargs):
    return serializers.ListField(child=serializers.FloatField(),
                                 min_length=3, max_length=3, **kwargs)


def box_field(**kwargs):
    return serializers.ListField(child=point_field(), min_length=2,
                                 max_length=2, **kwargs)


def validate_box(box):
    if box is not None and any(lo > hi for lo, hi in zip(*box)):
        raise serializers.ValidationError('Box corners must be (low, high).')
    return box


class CalibrationSerializer(serializers.Serializer):
    """Two picked points and their real distance in mm"""
    point_a = point_field()
    point_b = point_field()
    real_distance_mm = serializers.FloatField(min_value=0.0)

    def validate_real_distance_mm(self, value):
        if value <= 0:
            raise serializers.ValidationError('Must be positive.')
        return value


class PoseSerializer(serializers.Serializer):
    """Rigid pose with a row-major rotation"""
    rotation = serializers.ListField(child=serializers.FloatField(),
                                     min_length=9, max_length=9)
    translation = point_field()


class RimSerializer(serializers.Serializer):
    """A rim selection: vertex indices or explicit points"""
    indices = serializers.ListField(
        child=serializers.IntegerField(min_value=0), min_length=3,
        required=False)
    points = serializers.ListField(child=point_field(), min_length=3,
                                   required=False)

    def validate(self, attrs):
        if ('indices' in attrs) == ('points' in attrs):
            raise serializers.ValidationError(
                'Give either indices or points for a rim.')
        return attrs


class FragmentSerializer(serializers.Serializer):
    """One digitised fragment of the project"""
    id = serializers.RegexField(r'^[A-Za-z0-9_.-]+$', max_length=64)
    mesh = serializers.CharField()
    calibration = CalibrationSerializer(required=False)
    seed_pose = PoseSerializer(required=False)
    rims = RimSerializer(many=True, required=False, default=list)


class FragmentsTask(serializers.Serializer):
    """Base for tasks over a subset of the fragments"""
    fragments = serializers.ListField(child=serializers.CharField(),
                                      required=False)


class ScaleTask(FragmentsTask):
    recenter = serializers.BooleanField(default=False)


class CropTask(serializers.Serializer):
    fragment = serializers.CharField()
    box = box_field()
    keep = serializers.ChoiceField(choices=('inside', 'outside'),
                                   default='inside')

    def validate_box(self, value):
        return validate_box(value)


class SmoothTask(FragmentsTask):
    iterations = serializers.IntegerField(min_value=0, default=1)
    lam = serializers.FloatField(min_value=0.0, max_value=1.0, default=0.5)


class FitRimsTask(FragmentsTask):
    refine = serializers.BooleanField(default=True)


class SkeletonTask(serializers.Serializer):
    open_bottom = serializers.BooleanField(default=False)


class RevolveTask(serializers.Serializer):
    segments = serializers.IntegerField(min_value=8, required=False)


class HullVolumeTask(RevolveTask):
    pass


class AlignZTask(serializers.Serializer):
    moving = serializers.CharField()
    fixed = serializers.CharField()
    theta_steps = serializers.IntegerField(min_value=8, required=False)
    dz_range = serializers.ListField(child=serializers.FloatField(),
                                     min_length=2, max_length=2,
                                     required=False)
    dz_steps = serializers.IntegerField(min_value=1, required=False)
    objective = serializers.ChoiceField(choices=OBJECTIVES, default='mean')


class MergeTask(serializers.Serializer):
    inner = serializers.CharField()
    outer = serializers.CharField()
    id = serializers.CharField(default='merged')


class IcpTask(serializers.Serializer):
    moving = serializers.CharField()
    fixed = serializers.CharField()
    max_iterations = serializers.IntegerField(min_value=1, required=False)


class PoissonTask(FragmentsTask):
    grid = serializers.IntegerField(min_value=16, required=False)
    padding = serializers.FloatField(min_value=0.0, required=False)
    k = serializers.IntegerField(min_value=3, required=False)
    sheet = serializers.ChoiceField(choices=SHEETS, default='all')


class VolumeTask(serializers.Serializer):
    fix_orientation = serializers.BooleanField(default=False)


class SupportTask(FragmentsTask):
    shell = serializers.FloatField(required=False)
    clearance = serializers.FloatField(required=False)
    voxel = serializers.FloatField(required=False)
    label = serializers.CharField(required=False, allow_blank=True,
                                  default='')
    label_region = box_field(required=False)
    label_depth = serializers.FloatField(required=False)

    def validate_label_region(self, value):
        return validate_box(value)


class EngraveTask(serializers.Serializer):
    text = serializers.CharField()
    region = box_field()
    depth = serializers.FloatField(required=False)

    def validate_region(self, value):
        return validate_box(value)


class SplitTask(serializers.Serializer):
    build = point_field(required=False)
    margin = serializers.FloatField(min_value=0.0, required=False)
    seam_axis = serializers.ChoiceField(choices=SEAM_AXES, default='auto')


TASKS = {
    'scale': ScaleTask,
    'crop': CropTask,
    'smooth': SmoothTask,
    'fit_rims': FitRimsTask,
    'skeleton': SkeletonTask,
    'revolve': RevolveTask,
    'hull_volume': HullVolumeTask,
    'align_z': AlignZTask,
    'merge': MergeTask,
    'icp': IcpTask,
    'poisson': PoissonTask,
    'volume': VolumeTask,
    'support': SupportTask,
    'engrave': EngraveTask,
    'split': SplitTask,
}


def validate_task(entry):
    """Validate one pipeline entry; returns (task name, parameters)."""
    if not isinstance(entry, dict) or 'task' not in entry:
        raise serializers.ValidationError('Each task needs a "task" name.')
    params = dict(entry)
    name = params.pop('task')
    if name not in TASKS:
        raise serializers.ValidationError(
            f'Unknown task {name!r}; choose from {sorted(TASKS)}.')
    serializer = TASKS[name](data=params)
    unknown = sorted(set(params) - set(serializer.fields))
    if unknown:
        raise serializers.ValidationError(
            f'Unknown parameters for {name}: {unknown}.')
    if not serializer.is_valid():
        raise serializers.ValidationError({name: serializer.errors})
    return name, dict(serializer.validated_data)


class ProjectSerializer(serializers.Serializer):
    """Serializer for a project file"""
    schema_version = serializers.IntegerField()
    name = serializers.CharField(max_length=255)
    units = serializers.ChoiceField(choices=sorted(UNIT_TO_MM))
    up_axis = serializers.ChoiceField(choices=UP_AXES, default='z')
    output = serializers.CharField(default='output')
    photo_count = serializers.IntegerField(min_value=0, required=False,
                                           allow_null=True, default=None)
    point_count = serializers.IntegerField(min_value=0, required=False,
                                           allow_null=True, default=None)
    calculation_time = serializers.CharField(required=False,
                                             allow_blank=True, default='')
    fragments = FragmentSerializer(many=True)
    pipeline = serializers.ListField(child=serializers.DictField(),
                                     allow_empty=False)

    def validate_schema_version(self, value):
        if value != SCHEMA_VERSION:
            raise serializers.ValidationError(
                f'Unsupported schema version {value}; '
                f'expected {SCHEMA_VERSION}.')
        return value

    def validate_fragments(self, value):
        ids = [fragment['id'] for fragment in value]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise serializers.ValidationError(
                f'Duplicate fragment ids: {duplicates}.')
        base = Path(self.context.get('base_dir', '.'))
        missing = [f['mesh'] for f in value
                   if not (base / f['mesh']).is_file()]
        if missing:
            raise serializers.ValidationError(
                f'Mesh files not found: {missing}.')
        return value

    def validate_pipeline(self, value):
        tasks = [validate_task(entry) for entry in value]
        names = [name for name, _ in tasks]
        if 'engrave' in names and 'split' in names and (
                names.index('engrave') > names.index('split')):
            raise serializers.ValidationError(
                'engrave must come before split.')
        return tasks


class MetricsRecordSerializer(serializers.ModelSerializer):
    """Serializer for metrics rows"""

    class Meta:
        model = MetricsRecord
        fields = [
            'name', 'photo_count', 'point_count', 'surface_count',
            'vertex_count', 'calculation_time', 'volume_cm3',
            'hull_volume_cm3', 'hull_overestimate_pct',
        ]
