import json
import math
from io import StringIO
from pathlib import Path
from tempfile import TemporaryDirectory

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, tag

from apps.classify.models import class_by_label
from apps.qubits.exceptions import InvalidInputError, NumericalInvariantError
from apps.states.models import FamilySpec

from .management.base import INPUT_ERROR_EXIT, NUMERICAL_ERROR_EXIT, Bell4Command
from .management.commands.figure1 import DEFAULT_CLASSES
from .models import CSV_COLUMNS, manifest_path
from .utils import format_float, load_json, ordered_map, read_csv, sweep_spec, write_csv


GHZ4_SPEC = {'type': 'family', 'name': 'gghz', 'params': {'alpha': math.pi / 4}}
ZERO4_SPEC = {'type': 'family', 'name': 'basis', 'params': {'label': '0000'}}
GHZ4_SETTINGS = {
    'a': [[1, 0, 0], [1, 0, 0], [1, 0, 0], [1, 0, 0]],
    'b': [[1, 0, 0], [0, 1, 0], [0, 1, 0], [0, 1, 0]],
}


class CommandTestCase(SimpleTestCase):
    """Общая основа: временный каталог и запуск команд bell4"""

    def setUp(self):
        self._tmp = TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()

    def write(self, name, data):
        path = self.tmp / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding='utf-8')
        return str(path)

    def run_command(self, *args):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO())
        return out.getvalue()

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as context:
            self.run_command(*args)
        self.assertEqual(context.exception.returncode, code)
        return str(context.exception)


class AnalyzeCommandTests(CommandTestCase):
    """Тесты команды analyze"""

    def test_ghz_report(self):
        """Тест отчёта для GHZ_4 при известных настройках"""
        out = str(self.tmp / 'report.json')
        self.run_command('analyze', self.write('state.json', GHZ4_SPEC), self.write('settings.json', GHZ4_SETTINGS), '--out', out)
        report = json.loads(Path(out).read_text(encoding='utf-8'))
        for value, expected in zip(report['values'], (-2.0, -1.0, -1.0, -1.0)):
            self.assertAlmostEqual(value, expected, places=10)
        self.assertAlmostEqual(report['omega'], 7.0, places=10)
        self.assertAlmostEqual(report['lemma_sum'], 9.0, places=10)
        self.assertAlmostEqual(report['weighted_norm_sum'], 18.0, places=10)
        self.assertAlmostEqual(report['purity'], 1.0, places=10)
        self.assertEqual(len(report['spectral_radii']), 4)
        self.assertEqual(report['manifest']['command'], 'analyze')

    def test_manifest_written(self):
        """Тест файла манифеста рядом с отчётом"""
        out = str(self.tmp / 'report.json')
        self.run_command('analyze', self.write('state.json', ZERO4_SPEC), self.write('settings.json', GHZ4_SETTINGS), '--out', out)
        manifest = json.loads(Path(manifest_path(out)).read_text(encoding='utf-8'))
        self.assertEqual(manifest['version'], '1.0.0')
        self.assertEqual(manifest['rng_algorithm'], 'numpy.PCG64')
        self.assertEqual(manifest['state']['name'], 'basis')
        self.assertEqual(manifest['outputs'], [out])

    def test_bad_json_reports_position(self):
        """Тест: синтаксическая ошибка JSON даёт код 2 с номером строки и столбца"""
        state = self.write('state.json', '{\n  "type": \n}')
        message = self.assertExitCode(
            INPUT_ERROR_EXIT, 'analyze', state, self.write('settings.json', GHZ4_SETTINGS), '--out', str(self.tmp / 'r.json'),
        )
        self.assertIn('line 3 column 1', message)
        self.assertFalse((self.tmp / 'r.json').exists())

    def test_non_unit_settings(self):
        """Тест: ненормированные настройки дают код 2"""
        settings = dict(GHZ4_SETTINGS, a=[[1, 1, 0]] * 4)
        self.assertExitCode(
            INPUT_ERROR_EXIT, 'analyze', self.write('state.json', GHZ4_SPEC), self.write('settings.json', settings),
            '--out', str(self.tmp / 'r.json'),
        )

    def test_parameter_out_of_range(self):
        """Тест: alpha вне [0, pi/4] даёт код 2"""
        spec = {'type': 'family', 'name': 'gghz', 'params': {'alpha': 1.0}}
        self.assertExitCode(
            INPUT_ERROR_EXIT, 'analyze', self.write('state.json', spec), self.write('settings.json', GHZ4_SETTINGS),
            '--out', str(self.tmp / 'r.json'),
        )


class ClassifyCommandTests(CommandTestCase):
    """Тесты команды classify"""

    def test_zero_state_excludes_nothing(self):
        """Тест: |0000> совместимо со всеми классами"""
        out = str(self.tmp / 'classes.json')
        self.run_command('classify', self.write('state.json', ZERO4_SPEC), '--out', out, '--restarts', '4', '--seed', '3')
        report = json.loads(Path(out).read_text(encoding='utf-8'))
        self.assertEqual(report['excluded'], [])
        self.assertEqual(len(report['consistent']), 15)
        self.assertFalse(report['genuinely_multipartite'])
        self.assertEqual(report['manifest']['config']['restarts'], 4)
        self.assertEqual(report['manifest']['config']['seed'], 3)
        self.assertTrue(Path(manifest_path(out)).exists())

    def test_bad_restarts(self):
        """Тест: нулевое число стартов даёт код 2"""
        self.assertExitCode(
            INPUT_ERROR_EXIT, 'classify', self.write('state.json', ZERO4_SPEC), '--out', str(self.tmp / 'c.json'),
            '--restarts', '0',
        )


class SweepCommandTests(CommandTestCase):
    """Тесты команды sweep"""

    def test_gghz_sweep(self):
        """Тест CSV для обобщённого GHZ по alpha"""
        out = str(self.tmp / 'sweep.csv')
        self.run_command(
            'sweep', '--family', 'gghz', '--param', 'alpha', '--from', '0', '--to', repr(math.pi / 4),
            '--steps', '3', '--operator', '1', '--out', out, '--restarts', '24', '--seed', '0',
        )
        self.assertEqual(Path(out).read_text(encoding='utf-8').splitlines()[0], ','.join(CSV_COLUMNS))
        rows = read_csv(out)
        self.assertEqual(len(rows), 3)
        self.assertEqual(float(rows[-1]['param']), math.pi / 4)
        self.assertLess(abs(float(rows[0]['v1']) - 1.0), 1e-4)
        self.assertGreater(float(rows[-1]['v1']), 1.5)
        self.assertLessEqual(float(rows[-1]['v1']), 2.0 + 1e-8)
        for row in rows:
            self.assertEqual(row['v2'], '')
            self.assertEqual(row['class'], 'gghz')
            self.assertEqual(row['seed'], '0')
            self.assertEqual(row['v1'], format_float(float(row['v1'])))
        manifest = json.loads(Path(manifest_path(out)).read_text(encoding='utf-8'))
        self.assertEqual(manifest['options']['steps'], 3)

    def test_range_fails_before_optimizing(self):
        """Тест: выход за допустимый диапазон даёт код 2 без выходного файла"""
        out = self.tmp / 'sweep.csv'
        self.assertExitCode(
            INPUT_ERROR_EXIT, 'sweep', '--family', 'gghz', '--param', 'alpha', '--from', '0', '--to', '1',
            '--steps', '3', '--out', str(out),
        )
        self.assertFalse(out.exists())

    def test_bad_operator_and_family(self):
        """Тест отклонения неизвестного оператора и семейства"""
        common = ('--param', 'alpha', '--from', '0', '--to', '0.5', '--steps', '2', '--out', str(self.tmp / 's.csv'))
        self.assertExitCode(INPUT_ERROR_EXIT, 'sweep', '--family', 'gghz', '--operator', '5', *common)
        self.assertExitCode(INPUT_ERROR_EXIT, 'sweep', '--family', 'haar_pure', *common)


class Figure1CommandTests(CommandTestCase):
    """Тесты команды figure1"""

    def test_points(self):
        """Тест точек для двух классов"""
        out = str(self.tmp / 'figure1.csv')
        self.run_command(
            'figure1', '--samples', '2', '--classes', 'fully_separable,12-3-4', '--out', out,
            '--restarts', '2', '--max-sweeps', '30',
        )
        rows = read_csv(out)
        self.assertEqual([row['class'] for row in rows], ['fully_separable'] * 2 + ['12-3-4'] * 2)
        for row in rows:
            self.assertEqual(row['v2'], '')
            self.assertEqual(row['omega'], '')
        for row in rows[:2]:
            self.assertLessEqual(float(row['v1']), 1.0 + 1e-6)
            self.assertLessEqual(float(row['v3']), 1.0 + 1e-6)
        manifest = json.loads(Path(manifest_path(out)).read_text(encoding='utf-8'))
        self.assertEqual(manifest['options']['classes'], ['fully_separable', '12-3-4'])

    def test_bad_class_label(self):
        """Тест: неверная метка класса даёт код 2"""
        self.assertExitCode(
            INPUT_ERROR_EXIT, 'figure1', '--samples', '1', '--classes', '12-3', '--out', str(self.tmp / 'f.csv'),
        )

    @tag('slow')
    def test_points_stay_in_class_rectangles(self):
        """Тест: точки классов лежат в своих прямоугольниках, кандидаты выходят за [0, sqrt(3)]^2"""
        out = str(self.tmp / 'figure1.csv')
        self.run_command(
            'figure1', '--samples', '500', '--classes', ','.join(DEFAULT_CLASSES), '--out', out,
            '--restarts', '2', '--max-sweeps', '60', '--threads', '4',
        )
        rows = read_csv(out)
        self.assertEqual(len(rows), 500 * len(DEFAULT_CLASSES))
        outside = 0
        for row in rows:
            thresholds = class_by_label(row['class']).thresholds
            v1, v3 = float(row['v1']), float(row['v3'])
            self.assertLessEqual(v1, thresholds[0] + 1e-6, row['class'])
            self.assertLessEqual(v3, thresholds[2] + 1e-6, row['class'])
            if row['class'] == 'genuine' and max(v1, v3) > math.sqrt(3.0):
                outside += 1
        self.assertGreater(outside, 0)


class ExitCodeTests(SimpleTestCase):
    """Тесты отображения исключений в коды выхода"""

    def test_numerical_error(self):
        """Тест: нарушение численного инварианта даёт код 3"""

        class Failing(Bell4Command):
            def run(self, **options):
                raise NumericalInvariantError('omega exceeds 16')

        with self.assertLogs('apps.runs.management.base', level='ERROR'):
            with self.assertRaises(CommandError) as context:
                Failing().handle()
        self.assertEqual(context.exception.returncode, NUMERICAL_ERROR_EXIT)

    def test_input_error(self):
        """Тест: ошибка входных данных даёт код 2"""

        class Failing(Bell4Command):
            def run(self, **options):
                raise InvalidInputError('bad state')

        with self.assertRaises(CommandError) as context:
            Failing().handle()
        self.assertEqual(context.exception.returncode, INPUT_ERROR_EXIT)


class RunUtilsTests(SimpleTestCase):
    """Тесты вспомогательных функций запуска"""

    def test_load_json_rejects_nan(self):
        """Тест отклонения NaN в JSON"""
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / 'state.json'
            path.write_text('{"alpha": NaN}', encoding='utf-8')
            with self.assertRaises(InvalidInputError):
                load_json(path)
            with self.assertRaises(InvalidInputError):
                load_json(Path(tmp) / 'missing.json')

    def test_format_float(self):
        """Тест записи 17 значащих цифр"""
        self.assertEqual(format_float(0.1), '0.10000000000000001')
        self.assertEqual(float(format_float(math.pi)), math.pi)
        self.assertEqual(format_float(None), '')

    def test_write_csv(self):
        """Тест записи CSV с пустыми столбцами"""
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / 'nested' / 'out.csv'
            write_csv(path, [{'param': '1', 'v1': 0.5, 'class': 'gghz', 'seed': 0}])
            rows = read_csv(path)
        self.assertEqual(rows, [{'param': '1', 'v1': '0.5', 'v2': '', 'v3': '', 'v4': '', 'omega': '', 'class': 'gghz', 'seed': '0'}])

    def test_sweep_spec(self):
        """Тест дополнения двух- и трёхкубитных семейств кубитами |0>"""
        spec = sweep_spec('schmidt_pair', 'alpha', 0.3)
        self.assertEqual(spec.name, 'product')
        self.assertEqual(spec.parts[0].slots, (1, 2))
        self.assertEqual(spec.parts[0].spec.params['alpha'], 0.3)
        self.assertEqual(sweep_spec('w3', 'a', 0.1).parts[1].slots, (2, 3, 4))
        self.assertEqual(sweep_spec('gghz', 'alpha', 0.2), FamilySpec('gghz', {'alpha': 0.2}))
        with self.assertRaises(InvalidInputError):
            sweep_spec('gghz', 'beta', 0.2)
        with self.assertRaises(InvalidInputError):
            sweep_spec('basis', 'label', 0.2)

    def test_ordered_map(self):
        """Тест сохранения порядка при нескольких потоках"""
        self.assertEqual(ordered_map(lambda x: x * x, range(10), threads=3), [x * x for x in range(10)])


class DiscoveryTests(SimpleTestCase):
    """Тесты поиска тестов по меткам"""

    def test_apps_is_regular_package(self):
        """Тест: apps является обычным пакетом, поэтому `bell4 test` находит тесты всех приложений"""
        import apps

        self.assertIsNotNone(apps.__file__)
        self.assertTrue(apps.__file__.endswith('__init__.py'))
