from django.core.management.base import CommandError

from ...serializers import CheckRowSerializer, VerifyConfigSerializer
from ...verification import SUITES, run_suite
from ._base import HarmonicCommand, logger


class Command(HarmonicCommand):
    help = 'Run an acceptance suite; exits 1 when any check fails.'
    serializer_class = VerifyConfigSerializer
    row_serializer_class = CheckRowSerializer
    command_fields = ('suite',)

    def add_command_arguments(self, parser):
        parser.add_argument('suite', choices=list(SUITES))

    def compute(self, config):
        lam = config['lam'] if config['explicit_lambda'] else None
        results = run_suite(config['suite'], config['space'], lam, config['seed'])
        return [
            {
                'check': r.check,
                'defect': r.defect,
                'tolerance': r.tolerance,
                'passed': r.passed,
                'detail': r.detail,
            }
            for r in results
        ]

    def handle(self, *args, **options):
        config = self.validate(options)
        rows = self.run_compute(config)
        self.render(config, rows)

        failed = [row for row in rows if not row['passed']]
        for row in failed:
            self.stderr.write(f"FAIL {row['check']}: defect {row['defect']:.3e} > {row['tolerance']:.1e} {row['detail']}")
        if failed:
            logger.error(f"❌ verify {config['suite']}: {len(failed)} check(s) failed")
            raise CommandError(f"{len(failed)} of {len(rows)} checks failed in suite {config['suite']}", returncode=1)
