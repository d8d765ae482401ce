import math

import numpy as np
from rest_framework import serializers

from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import PureState

from .models import AmplitudeSpec, FamilySpec, MixtureSpec, SpecPart


STRING_PARAMS = {('basis', 'label')}
INTEGER_PARAMS = {('haar_pure', 'seed'), ('mixture', 'seed'), ('mixture', 'terms')}


def _nested_spec(data, field_name):
    serializer = StateSpecSerializer(data=data)
    if not serializer.is_valid():
        raise serializers.ValidationError({field_name: serializer.errors})
    return serializer.validated_data['spec']


class ProductPartSerializer(serializers.Serializer):
    """
    Serializer для части произведения: подсостояние и номера кубитов
    """
    slots = serializers.ListField(
        child=serializers.IntegerField(min_value=1, max_value=4),
        min_length=1,
        max_length=4,
        help_text='Номера кубитов (1..4), на которые помещается часть',
    )
    state = serializers.DictField(help_text='Описание подсостояния')


class MixtureTermSerializer(serializers.Serializer):
    """
    Serializer для слагаемого смеси
    """
    p = serializers.FloatField(help_text='Вес слагаемого (> 0)')
    state = serializers.DictField(help_text='Описание состояния')

    def validate_p(self, value):
        if not math.isfinite(value) or value <= 0.0:
            raise serializers.ValidationError('Вес должен быть положительным')
        return value


class StateSpecSerializer(serializers.Serializer):
    """
    Serializer для описания состояния:
    {"type": "family", "name": ..., "params": {...}, "parts": [...]},
    {"type": "pure", "amplitudes": [[re, im], ...]},
    {"type": "mixed", "terms": [{"p": ..., "state": {...}}, ...]}
    """
    type = serializers.ChoiceField(
        choices=['family', 'pure', 'mixed'],
        help_text='Вид описания: family, pure, mixed',
    )
    name = serializers.CharField(required=False, help_text='Имя семейства')
    params = serializers.DictField(required=False, default=dict, help_text='Параметры семейства')
    parts = ProductPartSerializer(many=True, required=False, help_text='Части произведения (product)')
    amplitudes = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(), min_length=2, max_length=2),
        required=False,
        help_text='Амплитуды [re, im] в порядке |0000>..|1111>',
    )
    terms = MixtureTermSerializer(many=True, required=False, help_text='Слагаемые смеси')

    def _family_params(self, name, params):
        cleaned = {}
        for key, value in params.items():
            if (name, key) in STRING_PARAMS:
                if not isinstance(value, str):
                    raise serializers.ValidationError({'params': f'{key} должен быть строкой'})
                cleaned[key] = value
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise serializers.ValidationError({'params': f'{key} должен быть числом'})
            if not math.isfinite(value):
                raise serializers.ValidationError({'params': f'{key} должен быть конечным'})
            if (name, key) in INTEGER_PARAMS:
                if int(value) != value:
                    raise serializers.ValidationError({'params': f'{key} должен быть целым'})
                value = int(value)
            cleaned[key] = value
        return cleaned

    def _build(self, attrs):
        kind = attrs['type']
        if kind == 'pure':
            if 'amplitudes' not in attrs:
                raise serializers.ValidationError({'amplitudes': 'Обязательное поле для type=pure'})
            pairs = np.array(attrs['amplitudes'], dtype=float)
            amplitudes = pairs[:, 0] + 1j * pairs[:, 1]
            PureState(amplitudes)
            return AmplitudeSpec(amplitudes)
        if kind == 'mixed':
            if not attrs.get('terms'):
                raise serializers.ValidationError({'terms': 'Обязательное поле для type=mixed'})
            return MixtureSpec(tuple(
                SpecPart(spec=_nested_spec(term['state'], 'terms'), p=term['p'])
                for term in attrs['terms']
            ))
        if 'name' not in attrs:
            raise serializers.ValidationError({'name': 'Обязательное поле для type=family'})
        parts = tuple(
            SpecPart(spec=_nested_spec(part['state'], 'parts'), slots=tuple(part['slots']))
            for part in attrs.get('parts') or ()
        )
        return FamilySpec(
            name=attrs['name'],
            params=self._family_params(attrs['name'], attrs.get('params') or {}),
            parts=parts,
        )

    def validate(self, attrs):
        try:
            attrs['spec'] = self._build(attrs)
        except InvalidInputError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data):
        return validated_data['spec']

    def to_representation(self, instance):
        if isinstance(instance, AmplitudeSpec):
            amplitudes = np.asarray(instance.amplitudes, dtype=complex)
            return {
                'type': 'pure',
                'amplitudes': [[float(z.real), float(z.imag)] for z in amplitudes],
            }
        if isinstance(instance, MixtureSpec):
            return {
                'type': 'mixed',
                'terms': [{'p': part.p, 'state': self.to_representation(part.spec)} for part in instance.terms],
            }
        data = {'type': 'family', 'name': instance.name, 'params': dict(instance.params)}
        if instance.parts:
            data['parts'] = [
                {'slots': list(part.slots), 'state': self.to_representation(part.spec)}
                for part in instance.parts
            ]
        return data
