import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from apps.bell.models import QUBITS, SettingSet, random_directions
from apps.bell.utils import bell_value
from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import DensityMatrix, PureState
from apps.qubits.utils import IDENTITY2, SIGMA_X, basis_state, mix, pure_to_density, purity
from apps.states.utils import generalized_ghz, haar_random_pure, product, random_mixture

from .models import CorrelationTensor
from .utils import (
    apply_local_unitaries,
    bell_expectations,
    bell_value_from_tensor,
    correlation_tensor,
    lemma_sum,
    pauli_tensor,
    random_local_unitaries,
    reconstruct_density,
    total_correlation_norm,
    weighted_norm_sum,
)


seeds = st.integers(0, 2 ** 32 - 1)

GHZ_POSITIVE = ('1111', '2222', '3333')
GHZ_NEGATIVE = ('1122', '1212', '2112', '2121', '1221', '2211')


def ghz4() -> DensityMatrix:
    return pure_to_density(generalized_ghz(np.pi / 4))


def zero_zero_bell_pair() -> DensityMatrix:
    bell = PureState(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2))
    return pure_to_density(product([(basis_state('00'), (1, 2)), (bell, (3, 4))]))


class CorrelationTensorTests(SimpleTestCase):
    """Тесты для тензора корреляций"""

    def test_zero_state(self):
        """Тест тензора состояния |0000>"""
        t = correlation_tensor(pure_to_density(basis_state('0000')))
        assert_allclose(t.singles, np.tile([0.0, 0.0, 1.0], (4, 1)), atol=1e-14)
        q = t.Q
        self.assertAlmostEqual(q[-1], 1.0, places=14)
        assert_allclose(q[:-1], 0.0, atol=1e-14)

    def test_ghz_components(self):
        """Тест компонент Q для GHZ_4"""
        t = correlation_tensor(ghz4())
        for paulis in GHZ_POSITIVE:
            self.assertAlmostEqual(t.component((1, 2, 3, 4), paulis), 1.0, places=12)
        for paulis in GHZ_NEGATIVE:
            self.assertAlmostEqual(t.component((1, 2, 3, 4), paulis), -1.0, places=12)
        self.assertAlmostEqual(float(np.sum(t.Q ** 2)), 9.0, places=12)
        assert_allclose(t.singles, 0.0, atol=1e-14)

    def test_ghz_quad_vector_order(self):
        """Тест порядка компонент: Q_1111 первая, Q_3333 последняя"""
        t = correlation_tensor(ghz4())
        self.assertAlmostEqual(t.Q[0], 1.0, places=12)
        self.assertAlmostEqual(t.Q[80], 1.0, places=12)

    def test_maximally_mixed(self):
        """Тест: у I/16 все неединичные компоненты равны нулю"""
        t = correlation_tensor(DensityMatrix.maximally_mixed())
        self.assertAlmostEqual(t.components[0, 0, 0, 0], 1.0, places=14)
        self.assertAlmostEqual(total_correlation_norm(t), 0.0, places=14)
        self.assertAlmostEqual(lemma_sum(t), 0.0, places=14)

    def test_components_bounded(self):
        """Тест: все компоненты лежат в [-1, 1]"""
        t = pauli_tensor(random_mixture(7, 3))
        self.assertLessEqual(float(np.max(np.abs(t))), 1.0 + 1e-10)

    def test_named_vectors(self):
        """Тест именованных векторов T, S, V, U"""
        t = correlation_tensor(pure_to_density(basis_state('0000')))
        for name in ('T', 'S', 'V', 'U'):
            vector = getattr(t, name)
            self.assertEqual(vector.shape, (27,))
            self.assertAlmostEqual(vector[-1], 1.0, places=14)
        self.assertEqual(set(t.named_norms()), {'alpha', 'beta', 'gamma', 'epsilon', 'S', 'T', 'U', 'V', 'Q'})

    def test_bad_shape(self):
        """Тест отклонения тензора неверной формы"""
        with self.assertRaises(InvalidInputError):
            CorrelationTensor(np.zeros((4, 4, 4)))

    def test_component_arity(self):
        """Тест: число индексов Паули совпадает с числом кубитов"""
        t = correlation_tensor(ghz4())
        with self.assertRaises(InvalidInputError):
            t.component((1, 2), '1')

    def test_needs_four_qubits(self):
        """Тест отклонения двухкубитного состояния"""
        with self.assertRaises(InvalidInputError):
            pauli_tensor(DensityMatrix.maximally_mixed(2))

    @settings(deadline=None, max_examples=25)
    @given(seed=seeds, terms=st.integers(1, 4))
    def test_reconstruction(self, seed, terms):
        """Тест восстановления матрицы плотности по тензору"""
        rho = random_mixture(seed, terms)
        self.assertTrue(reconstruct_density(correlation_tensor(rho)).allclose(rho, atol=1e-10))


class NormIdentityTests(SimpleTestCase):
    """Тесты тождеств для норм корреляций"""

    def test_lemma_sum_on_product_states(self):
        """Тест: сумма норм равна 9 для произведений чистых кубитов"""
        rng = np.random.default_rng(8)
        for _ in range(20):
            psi = product([(haar_random_pure(rng, 1), (q,)) for q in QUBITS])
            self.assertAlmostEqual(lemma_sum(correlation_tensor(pure_to_density(psi))), 9.0, places=9)

    def test_lemma_sum_on_generalized_ghz(self):
        """Тест: сумма норм равна 9 для обобщённых GHZ-состояний"""
        for alpha in np.linspace(0.0, np.pi / 4, 7):
            t = correlation_tensor(pure_to_density(generalized_ghz(alpha)))
            self.assertAlmostEqual(lemma_sum(t), 9.0, places=10)

    def test_lemma_sum_bell_pair_counterexample(self):
        """Тест: для |00> x пары Белла сумма норм равна 11"""
        t = correlation_tensor(zero_zero_bell_pair())
        norms = t.named_norms()
        self.assertAlmostEqual(norms['alpha'] + norms['beta'], 2.0, places=12)
        self.assertAlmostEqual(norms['V'] + norms['U'], 6.0, places=12)
        self.assertAlmostEqual(norms['Q'], 3.0, places=12)
        self.assertAlmostEqual(lemma_sum(t), 11.0, places=12)
        self.assertAlmostEqual(weighted_norm_sum(t), 18.0, places=12)

    def test_weighted_identity_on_haar_states(self):
        """Тест: 3 (одиночные) + (тройные) + 2 |Q|^2 = 18 для случайных чистых состояний"""
        rng = np.random.default_rng(9)
        for _ in range(200):
            t = correlation_tensor(pure_to_density(haar_random_pure(rng)))
            self.assertLess(abs(weighted_norm_sum(t) - 18.0), 1e-8)
            self.assertLess(abs(total_correlation_norm(t) - 15.0), 1e-8)

    def test_purity_identity(self):
        """Тест: полная норма равна 16 tr(rho^2) - 1"""
        rng = np.random.default_rng(10)
        for terms in (1, 2, 3, 4) * 10:
            rho = random_mixture(rng, terms)
            t = correlation_tensor(rho)
            self.assertLess(abs(total_correlation_norm(t) - (16 * purity(rho) - 1)), 1e-8)

    def test_diagonal_mixture(self):
        """Тест: для 1/2|0000><0000| + 1/2|1111><1111| полная норма равна 7"""
        rho = mix([(0.5, basis_state('0000')), (0.5, basis_state('1111'))])
        self.assertAlmostEqual(total_correlation_norm(correlation_tensor(rho)), 7.0, places=12)


class LocalUnitaryTests(SimpleTestCase):
    """Тесты для локальных унитарных преобразований"""

    def test_identity(self):
        """Тест: тождественные преобразования не меняют состояние"""
        rho = random_mixture(3, 2)
        self.assertTrue(apply_local_unitaries(rho, [IDENTITY2] * 4).allclose(rho, atol=1e-14))

    def test_x_flip_stabilizes_ghz(self):
        """Тест: X на всех кубитах оставляет GHZ_4 неизменным"""
        self.assertTrue(apply_local_unitaries(ghz4(), [SIGMA_X] * 4).allclose(ghz4(), atol=1e-14))

    def test_non_unitary_rejected(self):
        """Тест отклонения неунитарного множителя"""
        with self.assertRaises(InvalidInputError):
            apply_local_unitaries(ghz4(), [IDENTITY2] * 3 + [2 * IDENTITY2])
        with self.assertRaises(InvalidInputError):
            apply_local_unitaries(ghz4(), [IDENTITY2] * 3)

    @settings(deadline=None, max_examples=25)
    @given(seed=seeds)
    def test_named_norms_invariant(self, seed):
        """Тест инвариантности девяти норм"""
        rng = np.random.default_rng(seed)
        rho = random_mixture(rng, int(rng.integers(1, 5)))
        rotated = apply_local_unitaries(rho, random_local_unitaries(rng))
        before = correlation_tensor(rho).named_norms()
        after = correlation_tensor(rotated).named_norms()
        for name, value in before.items():
            self.assertLess(abs(after[name] - value), 1e-8, name)
        self.assertAlmostEqual(purity(rotated), purity(rho), places=10)

    def test_rotated_product_keeps_lemma_sum(self):
        """Тест: повёрнутое |0000> даёт сумму норм 9"""
        rng = np.random.default_rng(12)
        rho = apply_local_unitaries(pure_to_density(basis_state('0000')), random_local_unitaries(rng))
        self.assertAlmostEqual(lemma_sum(correlation_tensor(rho)), 9.0, places=9)


class TensorEvaluationTests(SimpleTestCase):
    """Тесты вычисления <D_4^(i)> через тензор"""

    @settings(deadline=None, max_examples=30)
    @given(seed=seeds, i=st.integers(1, 4))
    def test_matches_dense(self, seed, i):
        """Тест совпадения со следом плотной матрицы"""
        rng = np.random.default_rng(seed)
        rho = random_mixture(rng, 2)
        settings_ = SettingSet.random(rng)
        self.assertAlmostEqual(
            bell_value_from_tensor(correlation_tensor(rho), settings_, i),
            bell_value(rho, settings_, i),
            places=10,
        )

    def test_batch_shape(self):
        """Тест пакетного вычисления для нескольких наборов"""
        rng = np.random.default_rng(13)
        components = pauli_tensor(ghz4())
        batch = random_directions(rng, (5, 2, 4))
        values = bell_expectations(components, batch, 2)
        self.assertEqual(values.shape, (5,))
        for vectors, value in zip(batch, values):
            self.assertAlmostEqual(value, bell_value(ghz4(), SettingSet.from_array(vectors), 2), places=10)
