from apps.bell.models import QUBITS
from apps.bell.utils import bell_values, build_d4
from apps.correlations.utils import correlation_tensor, lemma_sum, weighted_norm_sum
from apps.qubits.utils import purity
from apps.runs.management.base import Bell4Command
from apps.runs.models import RunManifest
from apps.runs.serializers import AnalyzeReportSerializer
from apps.runs.utils import (
    load_settings,
    load_state_spec,
    manifest_data,
    state_representation,
    write_json,
    write_manifest,
)
from apps.states.utils import build_density


class Command(Bell4Command):
    help = 'Значения <D_4^(i)>, omega и сумма норм корреляций для заданных настроек'

    def add_arguments(self, parser):
        parser.add_argument('state', type=str, help='JSON-файл с описанием состояния')
        parser.add_argument('settings', type=str, help='JSON-файл с настройками {"a": ..., "b": ...}')
        parser.add_argument('--out', type=str, required=True, help='Файл отчёта (JSON)')

    def run(self, **options):
        spec = load_state_spec(options['state'])
        settings = load_settings(options['settings'])
        rho = build_density(spec)

        values = bell_values(rho, settings)
        tensor = correlation_tensor(rho)
        report = dict(AnalyzeReportSerializer({
            'values': list(values),
            'omega': sum(value ** 2 for value in values),
            'lemma_sum': lemma_sum(tensor),
            'weighted_norm_sum': weighted_norm_sum(tensor),
            'named_norms': tensor.named_norms(),
            'purity': purity(rho),
            'spectral_radii': [build_d4(settings, i).spectral_radius for i in QUBITS],
        }).data)

        manifest = RunManifest(
            command='analyze',
            config={},
            outputs=(options['out'],),
            state=state_representation(spec),
            options={'settings': options['settings']},
        )
        report['manifest'] = manifest_data(manifest)
        write_json(options['out'], report)
        write_manifest(manifest)

        self.stdout.write(
            self.style.SUCCESS(
                'Значения <D_4^(i)>: ' + ', '.join(f'{value:.10f}' for value in values)
                + f'; omega = {report["omega"]:.10f}'
            )
        )
