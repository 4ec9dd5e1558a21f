import logging

from ...exceptions import SpectralPole, UnsupportedSpace
from ...rankone import spherical_oracle
from ...serializers import EvalConfigSerializer, EvalRowSerializer
from ...spherical import phi_hc_series, phi_via_bochner
from ._base import HarmonicCommand

logger = logging.getLogger(__name__)


class Command(HarmonicCommand):
    help = 'Evaluate the spherical function phi_lambda(t) by one or more routes.'
    serializer_class = EvalConfigSerializer
    row_serializer_class = EvalRowSerializer
    command_fields = ('t', 'methods')

    def add_command_arguments(self, parser):
        parser.add_argument('--t', help='LIST or START:STOP:STEP, entries may be complex (0+1.5i)')
        parser.add_argument('--methods', help="Comma separated subset of bochner,series,oracle, or 'all'")

    def _route(self, method, config, t):
        space, lam, tol = config['space'], config['lam'], config['tol']
        if method == 'bochner':
            return phi_via_bochner(space, lam, t, tol=tol, strict=False)
        if t.imag != 0:
            return None
        if method == 'oracle':
            return spherical_oracle(space, lam, abs(t.real))
        if t.real == 0:
            return None
        return phi_hc_series(space, lam, abs(t.real), tol=tol)

    def _point(self, config, t):
        rows = []
        for method in config['methods']:
            try:
                result = self._route(method, config, t)
            except (SpectralPole, UnsupportedSpace) as e:
                if not config['skip_unsupported']:
                    raise
                logger.warning(f'⚠️ {method} skipped at t={t}: {e.detail}')
                continue
            if result is None:
                logger.warning(f'⚠️ {method} is not defined at t={t}; row skipped')
                continue
            rows.append({
                't_re': t.real,
                't_im': t.imag,
                'value_re': result.value.real,
                'value_im': result.value.imag,
                'method': result.method.value,
                'abs_err': result.abs_err,
            })
        return rows

    def compute(self, config):
        per_point = self.fan_out(lambda t: self._point(config, t), config['t'], config)
        return [row for rows in per_point for row in rows]
