"""
Serializers for synthetic scenario files.
"""

from rest_framework import serializers

from core.io import FORMATS


class ProfileSerializer(serializers.Serializer):
    """Control rows of (height, outer radius, wall thickness)"""
    control = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(),
                                    min_length=3, max_length=3),
        min_length=2,
    )
    segments = serializers.IntegerField(min_value=8, required=False)


class FractureSerializer(serializers.Serializer):
    """Fracture plan plus the share of surface to keep"""
    seed_count = serializers.IntegerField(min_value=2)
    rng_seed = serializers.IntegerField(default=0)
    noise_sigma = serializers.FloatField(min_value=0.0, default=0.0)
    scatter = serializers.BooleanField(default=False)
    coverage = serializers.FloatField(min_value=0.0, max_value=1.0,
                                      default=1.0)

    def validate_coverage(self, value):
        if value <= 0:
            raise serializers.ValidationError('Coverage must be positive.')
        return value


class ScenarioSerializer(serializers.Serializer):
    """Serializer for a synth scenario document"""
    name = serializers.CharField(max_length=100)
    profile = ProfileSerializer()
    fracture = FractureSerializer(required=False)
    format = serializers.ChoiceField(choices=sorted(FORMATS), default='ply')
