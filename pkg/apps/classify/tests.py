import math

import numpy as np
from django.test import SimpleTestCase, override_settings, tag

from apps.bell.models import QUBITS
from apps.optimize.models import OptimizeConfig
from apps.optimize.utils import seesaw_bell
from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import PureState
from apps.qubits.utils import basis_state, mix, pure_to_density
from apps.states.samplers import local_unitaries, random_ghz_type3, random_w_type3, sample_member
from apps.states.utils import apply_local_unitaries_to_pure, generalized_ghz, haar_random_pure, product

from .models import SeparabilityClass, all_classes, class_by_id, class_by_label
from .serializers import ClassificationReportSerializer
from .utils import classify, classify_violations, threshold_table


SQRT3 = math.sqrt(3.0)
GHZ3 = PureState(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2))


def ids(classes):
    return {c.id for c in classes}


class ThresholdTableTests(SimpleTestCase):
    """Тесты для таблицы границ классов"""

    def test_fifteen_classes(self):
        """Тест: четырнадцать именованных классов и неограниченный"""
        classes = all_classes()
        self.assertEqual(len(classes), 15)
        self.assertEqual(len(ids(classes)), 15)
        self.assertEqual(classes[-1].id, 'unrestricted')
        self.assertEqual(len(threshold_table()), 15)

    def test_thresholds(self):
        """Тест значений границ"""
        self.assertEqual(class_by_id('fully_separable').thresholds, (1.0, 1.0, 1.0, 1.0))
        self.assertEqual(class_by_id('tri_separable_12').thresholds, (1.0, 1.0, 1.5, 1.5))
        self.assertEqual(class_by_id('tri_separable_24').thresholds, (1.5, 1.0, 1.5, 1.0))
        self.assertEqual(class_by_id('bi_separable_13_24').thresholds, (1.5, 1.5, 1.5, 1.5))
        self.assertEqual(class_by_id('bi_separable_3_124').thresholds, (SQRT3, SQRT3, 2.0, SQRT3))
        self.assertEqual(class_by_id('unrestricted').thresholds, (2.0, 2.0, 2.0, 2.0))

    def test_nesting(self):
        """Тест: полностью сепарабельный класс имеет наименьшие границы"""
        smallest = class_by_id('fully_separable').thresholds
        for separability_class in all_classes():
            for low, high in zip(smallest, separability_class.thresholds):
                self.assertLessEqual(low, high)
            for bound in separability_class.thresholds:
                self.assertLessEqual(bound, 2.0)

    def test_labels(self):
        """Тест поиска класса по метке разбиения"""
        self.assertEqual(class_by_label('12-3-4').id, 'tri_separable_12')
        self.assertEqual(class_by_label('4-3-21').id, 'tri_separable_12')
        self.assertEqual(class_by_label('234-1').id, 'bi_separable_1_234')
        self.assertEqual(class_by_label('14-23').id, 'bi_separable_14_23')
        self.assertEqual(class_by_label('genuine').id, 'unrestricted')
        self.assertEqual(class_by_label('fully_separable').label, '1-2-3-4')
        with self.assertRaises(InvalidInputError):
            class_by_label('12-3')
        with self.assertRaises(InvalidInputError):
            class_by_id('tri_separable_56')

    def test_invalid_partition(self):
        """Тест отклонения некорректного разбиения"""
        with self.assertRaises(InvalidInputError):
            SeparabilityClass('tri_separable', ((1, 2), (3,)))
        with self.assertRaises(InvalidInputError):
            SeparabilityClass('quad_separable', ((1,), (2,), (3,), (4,)))


class ClassifyViolationsTests(SimpleTestCase):
    """Тесты исключения классов по значениям"""

    def test_ghz_like_values(self):
        """Тест: значения 2 исключают все именованные классы"""
        report = classify_violations((2.0, 2.0, 2.0, 2.0), 7.0, 1e-6)
        self.assertEqual(ids(report.consistent), {'unrestricted'})
        self.assertEqual(len(report.excluded), 14)
        self.assertTrue(report.genuinely_multipartite)

    def test_nothing_excluded(self):
        """Тест: значения не выше 1 совместимы со всеми классами"""
        report = classify_violations((1.0, 0.5, 1.0 + 1e-7, 0.0), 2.0, 1e-6)
        self.assertEqual(report.excluded, ())
        self.assertFalse(report.genuinely_multipartite)

    def test_singleton_reaches_two(self):
        """Тест: |0> x GHZ_3 даёт 2 на собственном операторе одиночного кубита"""
        report = classify_violations((2.0, 1.0, 1.0, 1.0), 4.0, 1e-6)
        self.assertIn('bi_separable_1_234', ids(report.consistent))
        self.assertIn('bi_separable_2_134', ids(report.excluded))
        self.assertIn('bi_separable_12_34', ids(report.excluded))
        self.assertNotIn('tri_separable_34', ids(report.consistent))

    def test_intermediate_values(self):
        """Тест: значение 1.6 исключает тройную и 2x2 сепарабельность, но не 1x3"""
        report = classify_violations((1.6, 1.6, 1.6, 1.6), 4.0, 1e-6)
        self.assertEqual(
            ids(report.consistent),
            {'bi_separable_1_234', 'bi_separable_2_134', 'bi_separable_3_124', 'bi_separable_4_123', 'unrestricted'},
        )

    def test_sign_is_ignored(self):
        """Тест: сравнивается модуль значения"""
        report = classify_violations((-1.2, 0.0, 0.0, 0.0), 1.44, 1e-6)
        self.assertIn('fully_separable', ids(report.excluded))
        self.assertIn('tri_separable_34', ids(report.consistent))

    def test_tolerance(self):
        """Тест допуска сравнения"""
        self.assertEqual(classify_violations((1.0 + 1e-7, 0, 0, 0), 1.0, 1e-6).excluded, ())
        self.assertIn('fully_separable', ids(classify_violations((1.0 + 1e-5, 0, 0, 0), 1.0, 1e-6).excluded))

    def test_bad_input(self):
        """Тест отклонения неверного числа значений и отрицательного допуска"""
        with self.assertRaises(InvalidInputError):
            classify_violations((1.0, 1.0, 1.0), 3.0, 1e-6)
        with self.assertRaises(InvalidInputError):
            classify_violations((1.0, 1.0, 1.0, 1.0), 4.0, -1.0)

    def test_serializer(self):
        """Тест сериализации отчёта"""
        report = classify_violations((2.0, 1.0, 1.0, 1.0), 4.0, 1e-6, optimizer={'restarts': 4})
        data = ClassificationReportSerializer(report).data
        self.assertEqual(data['violations'], [2.0, 1.0, 1.0, 1.0])
        self.assertIn('bi_separable_1_234', data['consistent'])
        self.assertIn('fully_separable', data['excluded'])
        self.assertFalse(data['genuinely_multipartite'])
        self.assertEqual(data['optimizer'], {'restarts': 4})


class ClassifyStateTests(SimpleTestCase):
    """Тесты полной классификации состояний"""

    def test_ghz_is_genuinely_multipartite(self):
        """Тест: GHZ_4 исключает все именованные классы"""
        report = classify(pure_to_density(generalized_ghz(np.pi / 4)), OptimizeConfig(restarts=12, seed=0))
        self.assertTrue(report.genuinely_multipartite)
        self.assertLessEqual(report.omega_max, 16.0 + 1e-8)
        self.assertEqual(report.optimizer['restarts'], 12)

    def test_zero_times_ghz3(self):
        """Тест: |0> x GHZ_3 совместимо с разбиением 1-234"""
        psi = product([(basis_state('0'), (1,)), (GHZ3, (2, 3, 4))])
        report = classify(pure_to_density(psi), OptimizeConfig(restarts=24, seed=1))
        self.assertIn('bi_separable_1_234', ids(report.consistent))
        self.assertIn('fully_separable', ids(report.excluded))
        self.assertGreaterEqual(report.violations[0], 2.0 - 1e-4)

    @override_settings(BELL4_CLASSIFY_TOLERANCE=1e-6)
    def test_sampled_members_not_excluded(self):
        """Тест: случайный член класса не исключается из своего класса"""
        rng = np.random.default_rng(17)
        cfg = OptimizeConfig(restarts=4, seed=2, max_sweeps=100)
        for label in ('fully_separable', '12-3-4', '13-24', '1-234'):
            report = classify(sample_member(label, rng), cfg)
            self.assertIn(class_by_label(label).id, ids(report.consistent), label)
            self.assertEqual(report.tolerance, 1e-6)


def optimized_values(rho, cfg) -> list[float]:
    return [seesaw_bell(rho, i, cfg).best_value for i in QUBITS]


def one_three_member(singleton: int, factor: PureState, rng) -> PureState:
    rest = tuple(q for q in QUBITS if q != singleton)
    block = apply_local_unitaries_to_pure(factor, local_unitaries(rng, 3))
    return product([(haar_random_pure(rng, 1), (singleton,)), (block, rest)])


@tag('slow')
class ClassBoundTests(SimpleTestCase):
    """Тесты: оптимизированные значения членов класса не выходят за его границы"""

    def setUp(self):
        self.cfg = OptimizeConfig(restarts=2, seed=0, max_sweeps=100)

    def assertWithinClass(self, label, rho):
        thresholds = class_by_label(label).thresholds
        for position, (value, bound) in enumerate(zip(optimized_values(rho, self.cfg), thresholds), start=1):
            self.assertLessEqual(value, bound + 1e-6, f'{label}: D_4^({position})')

    def test_fully_separable(self):
        """Тест: полностью сепарабельные состояния и их смеси дают не больше 1"""
        rng = np.random.default_rng(101)
        for draw in range(250):
            terms = 1 if draw < 200 else 3
            rho = sample_member('fully_separable', rng, terms)
            for value in optimized_values(rho, self.cfg):
                self.assertLessEqual(value, 1.0 + 1e-6)

    def test_tri_separable(self):
        """Тест: ρ_{ij-k-l} для всех шести пар"""
        rng = np.random.default_rng(102)
        for label in ('12-3-4', '13-2-4', '14-2-3', '23-1-4', '24-1-3', '34-1-2'):
            for draw in range(17):
                self.assertWithinClass(label, sample_member(label, rng, 1 + draw % 2))

    def test_two_two_separable(self):
        """Тест: ρ_{ij-kl} дают не больше 3/2"""
        rng = np.random.default_rng(103)
        for label in ('12-34', '13-24', '14-23'):
            for draw in range(34):
                rho = sample_member(label, rng, 1 + draw % 2)
                for value in optimized_values(rho, self.cfg):
                    self.assertLessEqual(value, 1.5 + 1e-6, label)

    def test_one_three_separable(self):
        """Тест: ρ_{i-jkl} из GHZ- и W-состояний дают не больше sqrt(3) вне одиночного кубита"""
        rng = np.random.default_rng(104)
        for singleton in QUBITS:
            label = f'{singleton}-' + ''.join(str(q) for q in QUBITS if q != singleton)
            for draw in range(25):
                sample = random_ghz_type3 if draw % 2 else random_w_type3
                psi = one_three_member(singleton, sample(rng), rng)
                if draw % 5 == 4:
                    other = one_three_member(singleton, sample(rng), rng)
                    rho = mix([(0.5, psi), (0.5, other)])
                else:
                    rho = pure_to_density(psi)
                values = optimized_values(rho, self.cfg)
                for position, value in enumerate(values, start=1):
                    bound = 2.0 if position == singleton else SQRT3
                    self.assertLessEqual(value, bound + 1e-6, f'{label}: D_4^({position})')
                self.assertWithinClass(label, rho)
