"""
Shared base for the bell4 commands: optimizer options and exit codes.

InvalidInputError -> exit code 2, NumericalInvariantError -> exit code 3.
"""
import logging

from django.core.management.base import BaseCommand, CommandError

from apps.optimize.models import OptimizeConfig
from apps.qubits.exceptions import InvalidInputError, NumericalInvariantError


logger = logging.getLogger(__name__)

INPUT_ERROR_EXIT = 2
NUMERICAL_ERROR_EXIT = 3


class Bell4Command(BaseCommand):
    """Subclasses implement `run(**options)` instead of `handle`."""

    def add_optimizer_arguments(self, parser):
        parser.add_argument('--restarts', type=int, help='Число случайных стартов (BELL4_RESTARTS)')
        parser.add_argument('--max-sweeps', type=int, dest='max_sweeps', help='Максимум проходов (BELL4_MAX_SWEEPS)')
        parser.add_argument('--tol', type=float, help='Порог улучшения за проход (BELL4_TOL)')
        parser.add_argument('--seed', type=int, help='Зерно генератора (BELL4_SEED)')
        parser.add_argument('--threads', type=int, help='Число потоков (BELL4_THREADS)')

    def optimize_config(self, options) -> OptimizeConfig:
        return OptimizeConfig.from_settings(
            restarts=options.get('restarts'),
            max_sweeps=options.get('max_sweeps'),
            tol=options.get('tol'),
            seed=options.get('seed'),
            threads=options.get('threads'),
        )

    def run(self, **options):
        raise NotImplementedError('subclasses of Bell4Command must provide a run() method')

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except InvalidInputError as exc:
            raise CommandError(f'Ошибка входных данных: {exc}', returncode=INPUT_ERROR_EXIT)
        except NumericalInvariantError as exc:
            logger.error('numerical invariant violated: %s', exc)
            raise CommandError(f'Нарушен численный инвариант: {exc}', returncode=NUMERICAL_ERROR_EXIT)
