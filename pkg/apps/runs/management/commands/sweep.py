import math
from dataclasses import replace

import numpy as np

from apps.bell.models import QUBITS
from apps.optimize.utils import seesaw_bell, seesaw_omega
from apps.qubits.exceptions import InvalidInputError
from apps.runs.management.base import Bell4Command
from apps.runs.models import RunManifest
from apps.runs.utils import format_float, ordered_map, state_representation, sweep_spec, write_csv, write_manifest
from apps.states.utils import build_density


class Command(Bell4Command):
    help = 'Оптимизированные |<D_4^(i)>| и omega вдоль параметра семейства состояний'

    def add_arguments(self, parser):
        parser.add_argument('--family', type=str, required=True, help='Семейство: gghz, schmidt_pair, ghz3, w3')
        parser.add_argument('--param', type=str, required=True, help='Изменяемый параметр, например alpha')
        parser.add_argument('--from', type=float, required=True, dest='start', help='Начальное значение')
        parser.add_argument('--to', type=float, required=True, dest='stop', help='Конечное значение')
        parser.add_argument('--steps', type=int, required=True, help='Число точек')
        parser.add_argument('--operator', type=str, default='all', help='all или номер оператора 1..4')
        parser.add_argument('--out', type=str, required=True, help='Выходной CSV')
        self.add_optimizer_arguments(parser)

    def _operators(self, value):
        if value == 'all':
            return QUBITS
        if value in ('1', '2', '3', '4'):
            return (int(value),)
        raise InvalidInputError(f'--operator must be "all" or 1..4, got {value!r}')

    def run(self, **options):
        cfg = self.optimize_config(options)
        operators = self._operators(options['operator'])
        start, stop, steps = options['start'], options['stop'], options['steps']
        if steps < 1:
            raise InvalidInputError(f'--steps must be positive, got {steps}')
        if not (math.isfinite(start) and math.isfinite(stop)):
            raise InvalidInputError('--from and --to must be finite')

        points = np.linspace(start, stop, steps) if steps > 1 else np.array([start])
        # Build every state first so a bad range fails before any optimization
        states = [
            (float(value), build_density(sweep_spec(options['family'], options['param'], value)))
            for value in points
        ]
        inner = replace(cfg, threads=1)

        def evaluate(point):
            value, rho = point
            row = {'param': format_float(value), 'class': options['family'], 'seed': cfg.seed}
            for i in operators:
                row[f'v{i}'] = seesaw_bell(rho, i, inner).best_value
            row['omega'] = seesaw_omega(rho, inner).best_value
            return row

        rows = ordered_map(evaluate, states, cfg.threads)
        write_csv(options['out'], rows)
        write_manifest(RunManifest(
            command='sweep',
            config=cfg.as_dict(),
            outputs=(options['out'],),
            state=state_representation(sweep_spec(options['family'], options['param'], start)),
            options={
                'family': options['family'],
                'param': options['param'],
                'from': start,
                'to': stop,
                'steps': steps,
                'operator': options['operator'],
            },
        ))
        self.stdout.write(self.style.SUCCESS(f'Записано строк: {len(rows)} в {options["out"]}'))
