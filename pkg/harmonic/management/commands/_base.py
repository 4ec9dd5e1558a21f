import logging
from concurrent.futures import ThreadPoolExecutor

from django.core.management.base import BaseCommand, CommandError

from zonal import __version__

from ...conf import harmonic_settings
from ...exceptions import HarmonicError
from ...renderers import RENDERERS

logger = logging.getLogger(__name__)

SHARED_FIELDS = ('space', 'lam', 'units', 'out', 'tol', 'seed', 'workers')


def _flatten_errors(errors, prefix=''):
    messages = []
    for field, detail in errors.items():
        name = f'{prefix}{field}'
        if isinstance(detail, dict):
            messages.extend(_flatten_errors(detail, f'{name}.'))
        else:
            messages.extend(f'{name}: {message}' for message in detail)
    return messages


class HarmonicCommand(BaseCommand):
    """
    Shared flags, RunConfig validation, error mapping and table output.

    Subclasses set ``serializer_class`` and ``row_serializer_class``, add
    their own flags in ``add_command_arguments`` and return row dicts from
    ``compute``.
    """
    serializer_class = None
    row_serializer_class = None
    command_fields = ()

    def add_arguments(self, parser):
        parser.add_argument('--space', help='Root multiplicities P,Q (default 1,0: SL(2,R))')
        parser.add_argument('--lambda', dest='lam', help='Spectral parameter RE[+IMi]')
        parser.add_argument('--units', choices=['rho', 'alpha', 'geodesic'])
        parser.add_argument('--out', choices=['json', 'csv'])
        parser.add_argument('--tol', type=float)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--workers', type=int, help='Thread pool size for parameter sweeps')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def compute(self, config):
        raise NotImplementedError

    def validate(self, options):
        data = {
            name: options[name]
            for name in SHARED_FIELDS + tuple(self.command_fields)
            if options.get(name) is not None
        }
        serializer = self.serializer_class(data=data)
        if not serializer.is_valid():
            raise CommandError('invalid_input: ' + '; '.join(_flatten_errors(serializer.errors)), returncode=2)
        return serializer.validated_data

    def fan_out(self, func, items, config):
        """func over items, results in input order."""
        items = list(items)
        if config['workers'] == 1 or len(items) < 2:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=config['workers']) as pool:
            return list(pool.map(func, items))

    def meta(self, config):
        lam = config['lam'].value
        return {
            'version': __version__,
            'space': str(config['space']),
            'lambda': {'re': float(lam.real), 'im': float(lam.imag)},
            'units': config['units'],
            'seed': config['seed'],
            'tol': float(config['tol'] or harmonic_settings.DEFAULT_TOL),
        }

    def render(self, config, rows):
        data = {
            'meta': self.meta(config),
            'rows': [self.row_serializer_class(row).data for row in rows],
        }
        self.stdout.write(RENDERERS[config['out']].render(data), ending='')

    def run_compute(self, config):
        """compute() with every failure mapped to a CommandError exit code."""
        name = self.__module__.rsplit('.', 1)[-1]
        try:
            return self.compute(config)
        except CommandError:
            raise
        except HarmonicError as e:
            logger.error(f'❌ {name} failed: {e.code}: {e.detail}')
            raise CommandError(f'{e.code}: {e.detail}', returncode=e.exit_code)
        except Exception as e:
            # numpy/scipy errors outside the harmonic hierarchy are numerical failures too
            logger.exception(f'❌ {name} failed: {type(e).__name__}: {e}')
            raise CommandError(f'numerical_failure: {type(e).__name__}: {e}', returncode=3)

    def handle(self, *args, **options):
        config = self.validate(options)
        rows = self.run_compute(config)
        self.render(config, rows)
        return None
