from apps.classify.serializers import ClassificationReportSerializer
from apps.classify.utils import classify
from apps.runs.management.base import Bell4Command
from apps.runs.models import RunManifest
from apps.runs.utils import (
    load_state_spec,
    manifest_data,
    state_representation,
    write_json,
    write_manifest,
)
from apps.states.utils import build_density


class Command(Bell4Command):
    help = 'Оптимизация |<D_4^(i)>| и omega и исключение классов сепарабельности'

    def add_arguments(self, parser):
        parser.add_argument('state', type=str, help='JSON-файл с описанием состояния')
        parser.add_argument('--out', type=str, required=True, help='Файл отчёта (JSON)')
        parser.add_argument('--tolerance', type=float, help='Допуск сравнения с границами (BELL4_CLASSIFY_TOLERANCE)')
        self.add_optimizer_arguments(parser)

    def run(self, **options):
        spec = load_state_spec(options['state'])
        cfg = self.optimize_config(options)
        rho = build_density(spec)

        report = classify(rho, cfg, options.get('tolerance'))
        data = dict(ClassificationReportSerializer(report).data)
        manifest = RunManifest(
            command='classify',
            config=cfg.as_dict(),
            outputs=(options['out'],),
            state=state_representation(spec),
            options={'tolerance': report.tolerance},
        )
        data['manifest'] = manifest_data(manifest)
        write_json(options['out'], data)
        write_manifest(manifest)

        excluded = ', '.join(c.id for c in report.excluded) or 'нет'
        self.stdout.write(self.style.SUCCESS(f'Исключённые классы: {excluded}'))
