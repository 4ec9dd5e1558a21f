import numpy as np

from ...bochner import bochner_density
from ...serializers import DensityConfigSerializer, DensityRowSerializer
from ._base import HarmonicCommand


class Command(HarmonicCommand):
    help = 'Tabulate the Bochner density m(lambda, upsilon).'
    serializer_class = DensityConfigSerializer
    row_serializer_class = DensityRowSerializer
    command_fields = ('upsilon',)

    def add_command_arguments(self, parser):
        parser.add_argument('--upsilon', help='LIST or START:STOP:STEP of real frequencies')

    def compute(self, config):
        density = bochner_density(config['space'], config['lam'])
        upsilon = np.asarray(config['upsilon'], dtype=float)
        values = np.atleast_1d(density(upsilon))
        return [
            {'upsilon': float(u), 'm_re': float(m.real), 'm_im': float(m.imag)}
            for u, m in zip(upsilon, values)
        ]
