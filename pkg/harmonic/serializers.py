import math

import numpy as np
from rest_framework import serializers

from .exceptions import HarmonicError
from .rankone import RankOneSpace, SpectralParam, TubePoint, Units
from .verification import SUITES

TUBE_RADIUS = math.pi
METHOD_CHOICES = ('bochner', 'series', 'oracle')
MAX_GRID_POINTS = 100000


def parse_complex(text):
    cleaned = str(text).strip().replace(' ', '').replace('i', 'j')
    if cleaned in ('j', '+j', '-j'):
        cleaned = cleaned.replace('j', '1j')
    return complex(cleaned)


def parse_grid(text, real=False):
    """
    A comma separated list of points or START:STOP:STEP (STOP included when
    it falls on the grid). Entries may be complex, e.g. 0+1.5i.
    """
    text = str(text).strip()
    if not text:
        raise serializers.ValidationError('Grid is empty')
    try:
        if ':' in text:
            start, stop, step = (parse_complex(part) for part in text.split(':'))
            span = (stop - start) / step if step != 0 else -1
            if step == 0 or abs(span.imag) > 1e-9 or span.real < 0:
                raise serializers.ValidationError(f"'{text}' does not describe a finite grid")
            count = int(math.floor(span.real + 1e-9)) + 1
            if count > MAX_GRID_POINTS:
                raise serializers.ValidationError(f"'{text}' has more than {MAX_GRID_POINTS} points")
            points = [start + k * step for k in range(count)]
        else:
            points = [parse_complex(part) for part in text.split(',')]
    except ValueError:
        raise serializers.ValidationError(f"Cannot read a grid from '{text}'")
    if real:
        if any(abs(p.imag) > 0 for p in points):
            raise serializers.ValidationError('This grid must be real')
        return [p.real for p in points]
    return points


class SpaceField(serializers.Field):
    default_error_messages = {
        'invalid': "Space must be given as 'P,Q' with P >= 1 and Q >= 0.",
    }

    def to_internal_value(self, data):
        try:
            return RankOneSpace.parse(data)
        except HarmonicError:
            self.fail('invalid')

    def to_representation(self, value):
        return str(value)


class ComplexField(serializers.Field):
    def to_internal_value(self, data):
        try:
            return parse_complex(data)
        except ValueError:
            raise serializers.ValidationError(f"Cannot read a complex number from '{data}'")

    def to_representation(self, value):
        return {'re': float(value.real), 'im': float(value.imag)}


class GridField(serializers.Field):
    def __init__(self, real=False, **kwargs):
        self.real = real
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        if isinstance(data, (list, tuple)):
            data = ','.join(str(item) for item in data)
        return parse_grid(data, real=self.real)

    def to_representation(self, value):
        return [complex(v) for v in value]


class RunConfigSerializer(serializers.Serializer):
    """Validated flags shared by every subcommand."""
    space = SpaceField(default=RankOneSpace(1, 0))
    lam = ComplexField(allow_null=True, default=None)
    units = serializers.ChoiceField(choices=[u.value for u in Units], default=Units.RHO.value)
    out = serializers.ChoiceField(choices=['json', 'csv'], default='json')
    tol = serializers.FloatField(allow_null=True, default=None, min_value=1e-15, max_value=1e-1)
    seed = serializers.IntegerField(default=0, min_value=0)
    workers = serializers.IntegerField(default=1, min_value=1, max_value=64)

    def validate(self, attrs):
        value = attrs['lam']
        attrs['explicit_lambda'] = value is not None
        attrs['lam'] = SpectralParam(0.0 if value is None else value, Units(attrs['units']))
        return attrs


class EvalConfigSerializer(RunConfigSerializer):
    t = GridField(default=[0j])
    methods = serializers.CharField(default='bochner')

    def validate_t(self, value):
        for t in value:
            if TubePoint(t).height >= TUBE_RADIUS:
                raise serializers.ValidationError(
                    f'OutsideTube: |Im t| = {TubePoint(t).height:g} is not below pi', code='outside_tube')
        return value

    def validate(self, attrs):
        attrs = super().validate(attrs)
        attrs['skip_unsupported'] = self.initial_data.get('methods') == 'all'
        return attrs

    def validate_methods(self, value):
        if value == 'all':
            return list(METHOD_CHOICES)
        methods = [m.strip() for m in value.split(',') if m.strip()]
        unknown = [m for m in methods if m not in METHOD_CHOICES]
        if unknown or not methods:
            raise serializers.ValidationError(
                f"Unknown method(s) {unknown}; choose from {', '.join(METHOD_CHOICES)} or 'all'")
        return methods


class DensityConfigSerializer(RunConfigSerializer):
    upsilon = GridField(real=True, default=[float(u) for u in np.linspace(-10.0, 10.0, 41)])


class SeriesConfigSerializer(RunConfigSerializer):
    t = GridField(real=True, default=[1.0])
    terms = serializers.IntegerField(allow_null=True, default=None, min_value=1, max_value=5000)

    def validate_t(self, value):
        if any(t <= 0 for t in value):
            raise serializers.ValidationError('The series needs t > 0')
        return value


class TransformConfigSerializer(RunConfigSerializer):
    kind = serializers.ChoiceField(choices=['abel', 'spherical', 'spectral-ff'])
    width = serializers.FloatField(default=1.0, min_value=0.1, max_value=3.0)
    grid = GridField(real=True, allow_null=True, default=None)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        if not attrs['space'].is_sl2:
            raise serializers.ValidationError({'space': 'Transforms are implemented for SL(2,R) (space 1,0) only'})
        return attrs


class VerifyConfigSerializer(RunConfigSerializer):
    suite = serializers.ChoiceField(choices=list(SUITES))


# Output rows

class EvalRowSerializer(serializers.Serializer):
    t_re = serializers.FloatField()
    t_im = serializers.FloatField()
    value_re = serializers.FloatField()
    value_im = serializers.FloatField()
    method = serializers.CharField()
    abs_err = serializers.FloatField()


class SeriesRowSerializer(EvalRowSerializer):
    terms = serializers.IntegerField()


class DensityRowSerializer(serializers.Serializer):
    upsilon = serializers.FloatField()
    m_re = serializers.FloatField()
    m_im = serializers.FloatField()


class TransformRowSerializer(serializers.Serializer):
    x = serializers.FloatField()
    value_re = serializers.FloatField()
    value_im = serializers.FloatField()


class CheckRowSerializer(serializers.Serializer):
    check = serializers.CharField()
    defect = serializers.FloatField()
    tolerance = serializers.FloatField()
    passed = serializers.BooleanField()
    detail = serializers.CharField(allow_blank=True)
