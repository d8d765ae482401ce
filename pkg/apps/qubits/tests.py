import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from .exceptions import InvalidInputError, NumericalInvariantError
from .models import DensityMatrix, PureState, UnitVector3, X_AXIS, Y_AXIS, Z_AXIS
from .utils import (
    IDENTITY2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    basis_state,
    embed_on_qubit,
    expectation,
    invert_permutation,
    is_hermitian,
    kron,
    kron_all,
    mix,
    observable_from_direction,
    partial_trace,
    permute_density,
    permute_qubits,
    pure_to_density,
    purity,
    tensor_states,
)


def random_pure(rng, num_qubits=4):
    amplitudes = rng.standard_normal(2 ** num_qubits) + 1j * rng.standard_normal(2 ** num_qubits)
    return PureState(amplitudes / np.linalg.norm(amplitudes))


permutations = st.permutations([1, 2, 3, 4])


class UnitVectorTests(SimpleTestCase):
    """Тесты для направлений измерений"""

    def test_non_unit_vector_rejected(self):
        """Тест отклонения вектора не единичной длины"""
        with self.assertRaises(InvalidInputError):
            UnitVector3(1.0, 1.0, 0.0)

    def test_non_finite_vector_rejected(self):
        """Тест отклонения NaN в направлении"""
        with self.assertRaises(InvalidInputError):
            UnitVector3(float('nan'), 0.0, 0.0)

    def test_near_unit_vector_renormalized(self):
        """Тест точной перенормировки почти единичного вектора"""
        v = UnitVector3(1.0 + 1e-12, 0.0, 0.0)
        self.assertEqual(v.x, 1.0)

    def test_from_angles(self):
        """Тест построения направления по углам"""
        v = UnitVector3.from_angles(np.pi / 2, np.pi / 2)
        assert_allclose(v.as_array(), [0.0, 1.0, 0.0], atol=1e-15)

    def test_from_array_normalize(self):
        """Тест нормировки произвольного вектора"""
        v = UnitVector3.from_array([0.0, 3.0, 4.0], normalize=True)
        assert_allclose(v.as_array(), [0.0, 0.6, 0.8])
        with self.assertRaises(InvalidInputError):
            UnitVector3.from_array([0.0, 0.0, 0.0], normalize=True)


class ObservableTests(SimpleTestCase):
    """Тесты для наблюдаемых a . sigma"""

    def test_axis_observables_are_paulis(self):
        """Тест совпадения осевых наблюдаемых с матрицами Паули"""
        assert_allclose(observable_from_direction(X_AXIS), SIGMA_X)
        assert_allclose(observable_from_direction(Y_AXIS), SIGMA_Y)
        assert_allclose(observable_from_direction(Z_AXIS), SIGMA_Z)
        self.assertEqual(SIGMA_Y[1, 0], 1j)

    def test_non_unit_list_rejected(self):
        """Тест отклонения списка не единичной длины"""
        with self.assertRaises(InvalidInputError):
            observable_from_direction([0.5, 0.0, 0.0])

    @settings(deadline=None, max_examples=50)
    @given(
        theta=st.floats(0.0, np.pi, allow_nan=False),
        phi=st.floats(0.0, 2 * np.pi, allow_nan=False),
    )
    def test_dichotomic(self, theta, phi):
        """Тест: собственные значения a . sigma равны -1 и +1, A^2 = I"""
        a = observable_from_direction(UnitVector3.from_angles(theta, phi))
        self.assertTrue(is_hermitian(a))
        assert_allclose(np.linalg.eigvalsh(a), [-1.0, 1.0], atol=1e-12)
        assert_allclose(a @ a, IDENTITY2, atol=1e-12)


class KronTests(SimpleTestCase):
    """Тесты для тензорных произведений"""

    def test_kron_dimension_cap(self):
        """Тест ограничения размерности 16"""
        eight = kron_all([IDENTITY2] * 3)
        with self.assertRaises(InvalidInputError):
            kron(eight, np.eye(4))

    def test_embed_on_qubit_ordering(self):
        """Тест: кубит 1 является старшим битом"""
        embedded = embed_on_qubit(SIGMA_Z, 1)
        diagonal = np.real(np.diag(embedded))
        assert_allclose(diagonal[:8], 1.0)
        assert_allclose(diagonal[8:], -1.0)
        last = np.real(np.diag(embed_on_qubit(SIGMA_Z, 4)))
        assert_allclose(last[::2], 1.0)
        assert_allclose(last[1::2], -1.0)

    def test_embed_bad_slot(self):
        """Тест отклонения номера кубита вне 1..4"""
        with self.assertRaises(InvalidInputError):
            embed_on_qubit(SIGMA_X, 5)


class StateTests(SimpleTestCase):
    """Тесты для чистых и смешанных состояний"""

    def test_unnormalized_state_rejected(self):
        """Тест отклонения ненормированного состояния"""
        with self.assertRaises(InvalidInputError):
            PureState(np.ones(16))

    def test_bad_dimension_rejected(self):
        """Тест отклонения размерности, не равной степени двойки"""
        with self.assertRaises(InvalidInputError):
            PureState(np.ones(3) / np.sqrt(3))

    def test_density_checks(self):
        """Тест проверок эрмитовости, следа и положительности"""
        with self.assertRaises(InvalidInputError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]))
        with self.assertRaises(InvalidInputError):
            DensityMatrix(np.eye(2))
        with self.assertRaises(InvalidInputError):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_basis_state(self):
        """Тест базисного состояния по битовой строке"""
        psi = basis_state('0101')
        self.assertEqual(int(np.argmax(np.abs(psi.amplitudes))), 5)
        with self.assertRaises(InvalidInputError):
            basis_state('012')

    def test_expectation_of_maximally_mixed(self):
        """Тест: среднее бесследовой наблюдаемой в I/16 равно 0"""
        rho = DensityMatrix.maximally_mixed()
        self.assertAlmostEqual(expectation(rho, embed_on_qubit(SIGMA_X, 2)), 0.0, places=14)

    def test_expectation_rejects_non_hermitian(self):
        """Тест отклонения неэрмитовой наблюдаемой"""
        rho = DensityMatrix.maximally_mixed(1)
        with self.assertRaises(InvalidInputError):
            expectation(rho, np.array([[0, 1], [0, 0]]))

    def test_mix_weights(self):
        """Тест проверки весов смеси"""
        zero, one = basis_state('0'), basis_state('1')
        rho = mix([(0.25, zero), (0.75, one)])
        assert_allclose(np.real(np.diag(rho.matrix)), [0.25, 0.75])
        with self.assertRaises(InvalidInputError):
            mix([(0.5, zero), (0.4, one)])
        with self.assertRaises(InvalidInputError):
            mix([(1.0, zero), (0.0, one)])
        with self.assertRaises(InvalidInputError):
            mix([])

    def test_purity(self):
        """Тест чистоты чистого и максимально смешанного состояний"""
        rng = np.random.default_rng(1)
        self.assertAlmostEqual(purity(pure_to_density(random_pure(rng))), 1.0, places=12)
        self.assertAlmostEqual(purity(DensityMatrix.maximally_mixed()), 1 / 16, places=14)

    def test_numerical_error_is_arithmetic(self):
        """Тест иерархии исключений"""
        self.assertTrue(issubclass(NumericalInvariantError, ArithmeticError))
        self.assertTrue(issubclass(InvalidInputError, ValueError))


class PermutationTests(SimpleTestCase):
    """Тесты для перестановок кубитов"""

    def test_move_qubit(self):
        """Тест: исходный кубит k переходит в позицию perm[k-1]"""
        moved = permute_qubits(basis_state('1000'), (3, 1, 2, 4))
        self.assertTrue(moved.allclose(basis_state('0010')))

    def test_invalid_permutation(self):
        """Тест отклонения некорректной перестановки"""
        with self.assertRaises(InvalidInputError):
            permute_qubits(basis_state('0000'), (1, 1, 2, 3))

    def test_invert(self):
        """Тест обращения перестановки"""
        self.assertEqual(invert_permutation((2, 3, 4, 1)), (4, 1, 2, 3))

    @settings(deadline=None, max_examples=30)
    @given(perm=permutations, seed=st.integers(0, 2 ** 32 - 1))
    def test_pure_and_density_agree(self, perm, seed):
        """Тест согласованности перестановки векторов и матриц плотности"""
        psi = random_pure(np.random.default_rng(seed))
        expected = pure_to_density(permute_qubits(psi, perm))
        actual = permute_density(pure_to_density(psi), perm)
        self.assertTrue(actual.allclose(expected, atol=1e-12))

    @settings(deadline=None, max_examples=30)
    @given(perm=permutations, seed=st.integers(0, 2 ** 32 - 1))
    def test_inverse_restores(self, perm, seed):
        """Тест: обратная перестановка восстанавливает состояние"""
        psi = random_pure(np.random.default_rng(seed))
        restored = permute_qubits(permute_qubits(psi, perm), invert_permutation(perm))
        self.assertTrue(restored.allclose(psi, atol=1e-12))

    def test_tensor_then_permute(self):
        """Тест перестановки произведения однокубитных состояний"""
        plus = PureState(np.array([1.0, 1.0]) / np.sqrt(2))
        zero = basis_state('0')
        psi = tensor_states([plus, zero, zero, zero])
        moved = permute_qubits(psi, (4, 1, 2, 3))
        self.assertTrue(moved.allclose(tensor_states([zero, zero, zero, plus]), atol=1e-14))


class PartialTraceTests(SimpleTestCase):
    """Тесты для частичного следа"""

    def test_product_marginals(self):
        """Тест маргиналов произведения состояний"""
        plus = PureState(np.array([1.0, 1.0]) / np.sqrt(2))
        psi = tensor_states([basis_state('1'), plus, basis_state('0'), plus])
        rho = pure_to_density(psi)
        self.assertTrue(partial_trace(rho, [2]).allclose(pure_to_density(plus)))
        self.assertTrue(partial_trace(rho, [1, 3]).allclose(pure_to_density(basis_state('10'))))

    def test_bell_pair_marginal_is_mixed(self):
        """Тест: маргинал пары Белла максимально смешан"""
        bell = PureState(np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2))
        psi = tensor_states([bell, basis_state('00')])
        reduced = partial_trace(pure_to_density(psi), [1])
        self.assertTrue(reduced.allclose(DensityMatrix.maximally_mixed(1)))

    def test_bad_keep(self):
        """Тест отклонения неверного списка кубитов"""
        with self.assertRaises(InvalidInputError):
            partial_trace(DensityMatrix.maximally_mixed(), [0])
        with self.assertRaises(InvalidInputError):
            partial_trace(DensityMatrix.maximally_mixed(), [])
