from rest_framework import serializers

from apps.qubits.exceptions import InvalidInputError

from .models import SettingSet


def direction_list_field(**kwargs):
    return serializers.ListField(
        child=serializers.ListField(
            child=serializers.FloatField(),
            min_length=3,
            max_length=3,
        ),
        min_length=4,
        max_length=4,
        **kwargs,
    )


class SettingSetSerializer(serializers.Serializer):
    """
    Serializer для настроек измерений: {"a": [[x, y, z] x 4], "b": [[x, y, z] x 4]}
    """
    a = direction_list_field(help_text='Единичные векторы a_1..a_4')
    b = direction_list_field(help_text='Единичные векторы b_1..b_4')

    def validate(self, attrs):
        try:
            attrs['settings'] = SettingSet.from_array([attrs['a'], attrs['b']])
        except InvalidInputError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data):
        return validated_data['settings']

    def to_representation(self, instance):
        vectors = instance.as_array()
        return {
            'a': vectors[0].tolist(),
            'b': vectors[1].tolist(),
        }
