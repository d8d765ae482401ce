from dataclasses import replace

import numpy as np

from apps.optimize.utils import seesaw_bell
from apps.qubits.exceptions import InvalidInputError
from apps.runs.management.base import Bell4Command
from apps.runs.models import RunManifest
from apps.runs.utils import ordered_map, write_csv, write_manifest
from apps.states.samplers import parse_partition, sample_member


DEFAULT_CLASSES = (
    'fully_separable',
    '12-3-4',
    '14-2-3',
    '12-34',
    '14-23',
    '1-234',
    '3-124',
    'genuine',
)


def sample_generator(seed: int, class_index: int, sample: int) -> np.random.Generator:
    """Independent stream for one sample of one class."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, class_index, sample])))


class Command(Bell4Command):
    help = 'Точки (|<D_4^(1)>|, |<D_4^(3)>|) для случайных состояний из классов сепарабельности'

    def add_arguments(self, parser):
        parser.add_argument('--samples', type=int, default=100, help='Число состояний на класс')
        parser.add_argument(
            '--classes',
            type=str,
            default=','.join(DEFAULT_CLASSES),
            help='Список классов через запятую: ' + ', '.join(DEFAULT_CLASSES),
        )
        parser.add_argument('--terms', type=int, default=1, help='Число чистых слагаемых в смеси (1 = чистые)')
        parser.add_argument('--out', type=str, required=True, help='Выходной CSV')
        self.add_optimizer_arguments(parser)

    def run(self, **options):
        cfg = self.optimize_config(options)
        samples = options['samples']
        if samples < 1:
            raise InvalidInputError(f'--samples must be at least 1, got {samples}')
        labels = [label.strip() for label in options['classes'].split(',') if label.strip()]
        if not labels:
            raise InvalidInputError('--classes is empty')
        for label in labels:
            parse_partition(label)
        inner = replace(cfg, threads=1)

        def evaluate(task):
            class_index, label, sample = task
            rho = sample_member(label, sample_generator(cfg.seed, class_index, sample), options['terms'])
            return {
                'param': sample,
                'v1': seesaw_bell(rho, 1, inner).best_value,
                'v3': seesaw_bell(rho, 3, inner).best_value,
                'class': label,
                'seed': cfg.seed,
            }

        tasks = [
            (class_index, label, sample)
            for class_index, label in enumerate(labels)
            for sample in range(samples)
        ]
        rows = ordered_map(evaluate, tasks, cfg.threads)
        write_csv(options['out'], rows)
        write_manifest(RunManifest(
            command='figure1',
            config=cfg.as_dict(),
            outputs=(options['out'],),
            options={
                'samples': samples,
                'classes': labels,
                'terms': options['terms'],
                'values': 'optimized per state',
            },
        ))
        self.stdout.write(self.style.SUCCESS(f'Записано точек: {len(rows)} в {options["out"]}'))
