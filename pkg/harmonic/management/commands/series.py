from ...conf import harmonic_settings
from ...serializers import SeriesConfigSerializer, SeriesRowSerializer
from ...spherical import phi_hc_series
from ._base import HarmonicCommand


class Command(HarmonicCommand):
    help = 'Sum the Harish-Chandra residue series (q = 0 spaces, t > 0).'
    serializer_class = SeriesConfigSerializer
    row_serializer_class = SeriesRowSerializer
    command_fields = ('t', 'terms')

    def add_command_arguments(self, parser):
        parser.add_argument('--t', help='LIST or START:STOP:STEP of positive reals')
        parser.add_argument('--terms', type=int, help='Terms per Weyl family (tail check skipped unless --tol)')

    def compute(self, config):
        terms = config['terms']

        def evaluate(t):
            result = phi_hc_series(config['space'], config['lam'], t, terms=terms, tol=config['tol'])
            return {
                't_re': t,
                't_im': 0.0,
                'value_re': result.value.real,
                'value_im': result.value.imag,
                'method': result.method.value,
                'abs_err': result.abs_err,
                'terms': terms or harmonic_settings.HC_MAX_TERMS,
            }

        return self.fan_out(evaluate, config['t'], config)
