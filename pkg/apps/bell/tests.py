import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import DensityMatrix, PureState, X_AXIS, Y_AXIS, Z_AXIS
from apps.qubits.utils import basis_state, expectation, is_hermitian, permute_density, pure_to_density
from apps.states.utils import generalized_ghz, haar_random_pure, product, random_mixture, schmidt_pair, w_type3

from .models import QUBITS, SLOTS, SettingSet, Slot, random_directions
from .serializers import SettingSetSerializer
from .utils import bell_value, bell_values, build_d4, d4_matrix, mermin_b3, omega, other_qubits


seeds = st.integers(0, 2 ** 32 - 1)


def ghz4() -> DensityMatrix:
    return pure_to_density(generalized_ghz(np.pi / 4))


def ghz4_settings() -> SettingSet:
    """a_j = x for all j, b_1 = x, b_j = y for j = 2, 3, 4."""
    return SettingSet(a=(X_AXIS,) * 4, b=(X_AXIS, Y_AXIS, Y_AXIS, Y_AXIS))


def bloch_vector(psi: PureState) -> np.ndarray:
    rho = pure_to_density(psi).matrix
    return np.array([2 * rho[0, 1].real, 2 * rho[1, 0].imag, (rho[0, 0] - rho[1, 1]).real])


def product_oracle(vectors: np.ndarray, blochs: np.ndarray, i: int) -> float:
    """<D_4^(i)> of a product of pure qubits with Bloch vectors `blochs`."""
    a, b = vectors
    c_i = 0.5 * (a[i - 1] + b[i - 1]) @ blochs[i - 1]
    d_i = 0.5 * (a[i - 1] - b[i - 1]) @ blochs[i - 1]
    j, k, l = other_qubits(i)
    r = {q: (a[q - 1] @ blochs[q - 1], b[q - 1] @ blochs[q - 1]) for q in (j, k, l)}
    mermin = 0.5 * (
        -r[j][0] * r[k][0] * r[l][0]
        + r[j][0] * r[k][1] * r[l][1]
        + r[j][1] * r[k][0] * r[l][1]
        + r[j][1] * r[k][1] * r[l][0]
    )
    return c_i * mermin + d_i


def schmidt_correlation(u: np.ndarray, v: np.ndarray, alpha: float) -> float:
    """<u.sigma x v.sigma> on cos(alpha)|01> - sin(alpha)|10>."""
    s = np.sin(2 * alpha)
    return float(-u[2] * v[2] - (u[0] * v[0] + u[1] * v[1]) * s)


def w_trilinear(u, v, w, a, b, c) -> float:
    """<u.sigma x v.sigma x w.sigma> on the W-type state."""
    d = max(0.0, 1.0 - (a + b + c))
    return float(
        (d - a - b - c) * u[2] * v[2] * w[2]
        + 2 * np.sqrt(c * d) * u[0] * v[2] * w[2]
        + 2 * np.sqrt(b * d) * u[2] * v[0] * w[2]
        + 2 * np.sqrt(a * d) * u[2] * v[2] * w[0]
        + 2 * np.sqrt(b * c) * (u[0] * v[0] + u[1] * v[1]) * w[2]
        + 2 * np.sqrt(a * c) * (u[0] * w[0] + u[1] * w[1]) * v[2]
        + 2 * np.sqrt(a * b) * u[2] * (v[0] * w[0] + v[1] * w[1])
    )


class SettingSetTests(SimpleTestCase):
    """Тесты для наборов настроек"""

    def test_slots(self):
        """Тест перечня восьми векторов"""
        self.assertEqual(len(SLOTS), 8)
        self.assertEqual(Slot('b', 3).index, (1, 2))
        self.assertEqual(Slot('a', 1).label, 'a1')

    def test_wrong_count_rejected(self):
        """Тест отклонения набора с тремя векторами"""
        with self.assertRaises(InvalidInputError):
            SettingSet(a=(X_AXIS,) * 3, b=(X_AXIS,) * 4)

    def test_s_and_t_are_orthogonal(self):
        """Тест: |s|^2 + |t|^2 = 1 и s . t = 0"""
        settings_ = SettingSet.random(np.random.default_rng(5))
        assert_allclose(np.sum(settings_.s ** 2, axis=1) + np.sum(settings_.t ** 2, axis=1), 1.0)
        assert_allclose(np.sum(settings_.s * settings_.t, axis=1), 0.0, atol=1e-15)

    def test_replace_and_swap(self):
        """Тест замены одного вектора и обмена a и b"""
        settings_ = SettingSet.uniform(X_AXIS, Y_AXIS)
        replaced = settings_.replace(Slot('b', 2), Z_AXIS)
        self.assertEqual(replaced.vector(Slot('b', 2)), Z_AXIS)
        self.assertEqual(replaced.vector(Slot('b', 1)), Y_AXIS)
        self.assertEqual(settings_.swapped().a, settings_.b)

    def test_permuted(self):
        """Тест: настройки кубита k переходят в позицию perm[k-1]"""
        settings_ = SettingSet(a=(X_AXIS, Y_AXIS, Z_AXIS, -X_AXIS), b=(X_AXIS,) * 4)
        moved = settings_.permuted((2, 3, 4, 1))
        self.assertEqual(moved.a, (-X_AXIS, X_AXIS, Y_AXIS, Z_AXIS))

    def test_random_directions_are_unit(self):
        """Тест единичности случайных направлений"""
        vectors = random_directions(np.random.default_rng(0), (2, 4))
        assert_allclose(np.linalg.norm(vectors, axis=-1), 1.0)


class SettingSetSerializerTests(SimpleTestCase):
    """Тесты для сериализатора настроек"""

    def test_valid_payload(self):
        """Тест разбора корректного JSON"""
        data = {'a': [[1, 0, 0]] * 4, 'b': [[0, 1, 0]] * 4}
        serializer = SettingSetSerializer(data=data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        settings_ = serializer.save()
        self.assertEqual(settings_, SettingSet.uniform(X_AXIS, Y_AXIS))
        self.assertEqual(SettingSetSerializer(settings_).data, {'a': [[1.0, 0.0, 0.0]] * 4, 'b': [[0.0, 1.0, 0.0]] * 4})

    def test_non_unit_vector(self):
        """Тест отклонения вектора не единичной длины"""
        serializer = SettingSetSerializer(data={'a': [[1, 1, 0]] + [[1, 0, 0]] * 3, 'b': [[0, 1, 0]] * 4})
        self.assertFalse(serializer.is_valid())

    def test_wrong_shape(self):
        """Тест отклонения вектора из двух компонент"""
        serializer = SettingSetSerializer(data={'a': [[1, 0]] * 4, 'b': [[0, 1, 0]] * 4})
        self.assertFalse(serializer.is_valid())
        self.assertIn('a', serializer.errors)


class OperatorTests(SimpleTestCase):
    """Тесты для операторов D_4^(i)"""

    def test_other_qubits(self):
        """Тест тройки кубитов оператора Мермина"""
        self.assertEqual(other_qubits(1), (2, 3, 4))
        self.assertEqual(other_qubits(3), (1, 2, 4))
        with self.assertRaises(InvalidInputError):
            other_qubits(5)

    def test_mermin_on_ghz3(self):
        """Тест: оператор Мермина на GHZ_3 равен -2"""
        ghz3 = PureState(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2))
        operator = mermin_b3(SettingSet.uniform(X_AXIS, Y_AXIS), (1, 2, 3))
        self.assertAlmostEqual(expectation(pure_to_density(ghz3), operator), -2.0, places=12)

    def test_mermin_triple_validation(self):
        """Тест отклонения неупорядоченной тройки"""
        settings_ = SettingSet.uniform(X_AXIS, Y_AXIS)
        with self.assertRaises(InvalidInputError):
            mermin_b3(settings_, (3, 1, 2))
        with self.assertRaises(InvalidInputError):
            mermin_b3(settings_, (1, 1, 2))

    def test_ghz4_value(self):
        """Тест: <D_4^(1)> на GHZ_4 равен -2"""
        self.assertAlmostEqual(bell_value(ghz4(), ghz4_settings(), 1), -2.0, places=12)

    def test_ghz4_omega_exceeds_four(self):
        """Тест: при тех же настройках остальные значения равны -1, omega = 7"""
        values = bell_values(ghz4(), ghz4_settings())
        assert_allclose(values, [-2.0, -1.0, -1.0, -1.0], atol=1e-12)
        self.assertAlmostEqual(omega(ghz4(), ghz4_settings()), 7.0, places=11)

    def test_maximally_mixed(self):
        """Тест: на I/16 все значения равны нулю"""
        rho = DensityMatrix.maximally_mixed()
        settings_ = SettingSet.random(np.random.default_rng(2))
        assert_allclose(bell_values(rho, settings_), 0.0, atol=1e-14)
        self.assertAlmostEqual(omega(rho, settings_), 0.0, places=14)

    def test_three_qubit_state_rejected(self):
        """Тест отклонения трёхкубитного состояния"""
        with self.assertRaises(InvalidInputError):
            bell_value(DensityMatrix.maximally_mixed(3), SettingSet.uniform(X_AXIS), 1)

    def test_equal_settings_reduce_to_product(self):
        """Тест: при a_j = b_j = z на |0000> значение равно 1"""
        rho = pure_to_density(basis_state('0000'))
        for i in QUBITS:
            self.assertAlmostEqual(bell_value(rho, SettingSet.uniform(Z_AXIS), i), 1.0, places=12)

    @settings(deadline=None, max_examples=40)
    @given(seed=seeds, i=st.integers(1, 4))
    def test_hermitian_with_bounded_spectrum(self, seed, i):
        """Тест эрмитовости и спектрального радиуса не больше 2"""
        operator = build_d4(SettingSet.random(np.random.default_rng(seed)), i)
        self.assertTrue(is_hermitian(operator.matrix))
        self.assertLessEqual(operator.spectral_radius, 2.0 + 1e-9)
        assert_allclose(operator.s, operator.settings.s[i - 1])

    @settings(deadline=None, max_examples=30)
    @given(seed=seeds, i=st.integers(1, 4), lam=st.floats(-2.0, 2.0, allow_nan=False))
    def test_multilinear_in_each_vector(self, seed, i, lam):
        """Тест аффинной линейности по каждому вектору направления"""
        rng = np.random.default_rng(seed)
        rho = random_mixture(rng, 2)
        vectors = random_directions(rng, (2, 4))
        slot = SLOTS[int(rng.integers(len(SLOTS)))]
        v1, v2 = random_directions(rng, (2,))

        def value_at(v):
            trial = vectors.copy()
            trial[slot.index] = v
            return float(np.real(np.trace(rho.matrix @ d4_matrix(trial, i))))

        mixed = value_at(lam * v1 + (1 - lam) * v2)
        self.assertAlmostEqual(mixed, lam * value_at(v1) + (1 - lam) * value_at(v2), places=10)

    @settings(deadline=None, max_examples=30)
    @given(seed=seeds, perm=st.permutations([1, 2, 3, 4]), i=st.integers(1, 4))
    def test_permutation_covariance(self, seed, perm, i):
        """Тест ковариантности при перестановке кубитов"""
        rng = np.random.default_rng(seed)
        rho = pure_to_density(haar_random_pure(rng))
        settings_ = SettingSet.random(rng)
        moved = bell_value(permute_density(rho, perm), settings_.permuted(perm), perm[i - 1])
        self.assertAlmostEqual(moved, bell_value(rho, settings_, i), places=10)


class BoundTests(SimpleTestCase):
    """Тесты границ значений операторов"""

    def test_random_states_respect_hard_bounds(self):
        """Тест: |<D_4^(i)>| <= 2 и omega <= 16 для случайных состояний"""
        rng = np.random.default_rng(2024)
        states = [pure_to_density(haar_random_pure(rng)) for _ in range(1000)]
        states += [random_mixture(rng, int(rng.integers(2, 6))) for _ in range(200)]
        for rho in states:
            settings_ = SettingSet.random(rng)
            values = bell_values(rho, settings_)
            self.assertLessEqual(max(abs(v) for v in values), 2.0 + 1e-8)
            self.assertAlmostEqual(omega(rho, settings_), sum(v * v for v in values), places=10)
            self.assertLessEqual(omega(rho, settings_), 16.0 + 1e-8)

    def test_product_states_within_one(self):
        """Тест: для полностью сепарабельных состояний |<D_4^(i)>| <= 1"""
        rng = np.random.default_rng(11)
        for _ in range(40):
            psi = product([(haar_random_pure(rng, 1), (q,)) for q in QUBITS])
            settings_ = SettingSet.random(rng)
            for value in bell_values(pure_to_density(psi), settings_):
                self.assertLessEqual(abs(value), 1.0 + 1e-10)


class ClosedFormTests(SimpleTestCase):
    """Тесты сравнения с аналитическими выражениями"""

    def test_product_state_formula(self):
        """Тест формулы для произведения однокубитных состояний"""
        rng = np.random.default_rng(3)
        for _ in range(20):
            qubits = [haar_random_pure(rng, 1) for _ in QUBITS]
            rho = pure_to_density(product([(psi, (q,)) for q, psi in zip(QUBITS, qubits)]))
            blochs = np.array([bloch_vector(psi) for psi in qubits])
            settings_ = SettingSet.random(rng)
            for i in QUBITS:
                expected = product_oracle(settings_.as_array(), blochs, i)
                self.assertAlmostEqual(bell_value(rho, settings_, i), expected, places=10)

    def test_schmidt_pair_formula(self):
        """Тест формул для пары Шмидта на кубитах 1, 2 и |00> на 3, 4"""
        rng = np.random.default_rng(4)
        for alpha in (0.1, np.pi / 8, np.pi / 4, 1.2):
            rho = pure_to_density(product([(schmidt_pair(alpha), (1, 2)), (basis_state('00'), (3, 4))]))
            settings_ = SettingSet.random(rng)
            a, b = settings_.as_array()
            c1 = 0.5 * (a[0] + b[0])
            d1 = 0.5 * (a[0] - b[0])
            expected_1 = (
                schmidt_correlation(c1, a[1], alpha) * 0.5 * (-a[2][2] * a[3][2] + b[2][2] * b[3][2])
                + schmidt_correlation(c1, b[1], alpha) * 0.5 * (a[2][2] * b[3][2] + b[2][2] * a[3][2])
                + d1[2] * np.cos(2 * alpha)
            )
            self.assertAlmostEqual(bell_value(rho, settings_, 1), expected_1, places=10)

            corr = {
                (p, q): schmidt_correlation(u, v, alpha)
                for p, u in (('a', a[0]), ('b', b[0]))
                for q, v in (('a', a[1]), ('b', b[1]))
            }
            expected_3 = 0.25 * (a[2][2] + b[2][2]) * (
                (-corr['a', 'a'] + corr['b', 'b']) * a[3][2]
                + (corr['a', 'b'] + corr['b', 'a']) * b[3][2]
            ) + 0.5 * (a[2][2] - b[2][2])
            self.assertAlmostEqual(bell_value(rho, settings_, 3), expected_3, places=10)

    def test_zero_times_w_formula(self):
        """Тест формулы для |0> x W-состояния на кубитах 2, 3, 4"""
        rng = np.random.default_rng(6)
        for a_, b_, c_ in ((0.25, 0.25, 0.25), (0.1, 0.3, 0.5), (1 / 3, 1 / 3, 1 / 3)):
            rho = pure_to_density(product([(basis_state('0'), (1,)), (w_type3(a_, b_, c_), (2, 3, 4))]))
            settings_ = SettingSet.random(rng)
            a, b = settings_.as_array()

            def t(x2, x3, x4):
                return w_trilinear(x2, x3, x4, a_, b_, c_)

            mermin = 0.5 * (-t(a[1], a[2], a[3]) + t(a[1], b[2], b[3]) + t(b[1], a[2], b[3]) + t(b[1], b[2], a[3]))
            expected = 0.5 * (a[0] + b[0])[2] * mermin + 0.5 * (a[0] - b[0])[2]
            self.assertAlmostEqual(bell_value(rho, settings_, 1), expected, places=8)
