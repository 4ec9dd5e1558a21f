import numpy as np

from ...serializers import TransformConfigSerializer, TransformRowSerializer
from ...transforms import (
    RadialFunction,
    abel_transform,
    spectral_ff,
    spectral_grid,
    spherical_transform,
)
from ._base import HarmonicCommand


class Command(HarmonicCommand):
    help = 'Abel, spherical or spectral Abel transform of a truncated Gaussian on SL(2,R)/SO(2).'
    serializer_class = TransformConfigSerializer
    row_serializer_class = TransformRowSerializer
    command_fields = ('kind', 'width', 'grid')

    def add_command_arguments(self, parser):
        parser.add_argument('kind', choices=['abel', 'spherical', 'spectral-ff'])
        parser.add_argument('--width', type=float, help='Gaussian width sigma (support 6 sigma)')
        parser.add_argument('--grid', help='Output grid: t for abel, nu for spherical, upsilon for spectral-ff')

    def compute(self, config):
        f = RadialFunction.truncated_gaussian(config['width'])
        grid = config['grid']

        if config['kind'] == 'abel':
            x = np.linspace(0.0, f.support_bound, 61) if grid is None else np.asarray(grid)
            values = abel_transform(f, x)
        elif config['kind'] == 'spherical':
            x = spectral_grid(f) if grid is None else np.asarray(grid)
            values = spherical_transform(f, x).values
        else:
            x = np.linspace(0.0, 10.0, 101) if grid is None else np.asarray(grid)
            values = spectral_ff(spherical_transform(f, spectral_grid(f)), x)

        values = np.asarray(values, dtype=complex)
        return [
            {'x': float(point), 'value_re': float(v.real), 'value_im': float(v.imag)}
            for point, v in zip(x, values)
        ]
