import numpy as np
from django.test import SimpleTestCase, override_settings, tag
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from apps.bell.models import QUBITS, SLOTS, SettingSet, random_directions
from apps.bell.utils import bell_value, d4_matrix, omega
from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import DensityMatrix, X_AXIS, Y_AXIS, Z_AXIS
from apps.qubits.utils import basis_state, pure_to_density
from apps.states.utils import generalized_ghz, haar_random_pure, product, random_mixture, schmidt_pair

from .grid import grid_angles, grid_directions, grid_oracle, grid_search, grid_size
from .models import Objective, OptimizeConfig, OptimizeResult
from .utils import (
    direction_gradient,
    maximize_quadratic_on_sphere,
    restart_generators,
    seesaw_bell,
    seesaw_omega,
)


def ghz4() -> DensityMatrix:
    return pure_to_density(generalized_ghz(np.pi / 4))


def zero4() -> DensityMatrix:
    return pure_to_density(basis_state('0000'))


def ghz4_settings() -> SettingSet:
    return SettingSet(a=(X_AXIS,) * 4, b=(X_AXIS, Y_AXIS, Y_AXIS, Y_AXIS))


def dense_value(rho: DensityMatrix, vectors: np.ndarray, i: int) -> float:
    return float(np.real(np.trace(rho.matrix @ d4_matrix(vectors, i))))


class ConfigTests(SimpleTestCase):
    """Тесты для параметров оптимизатора"""

    def test_validation(self):
        """Тест отклонения некорректных параметров"""
        for kwargs in ({'restarts': 0}, {'max_sweeps': 0}, {'tol': 0.0}, {'threads': 0}, {'seed': -1}, {'restarts': 1.5}):
            with self.assertRaises(InvalidInputError, msg=str(kwargs)):
                OptimizeConfig(**kwargs)

    @override_settings(BELL4_RESTARTS=5, BELL4_SEED=9)
    def test_from_settings(self):
        """Тест значений по умолчанию из настроек и явных переопределений"""
        cfg = OptimizeConfig.from_settings(restarts=None, max_sweeps=7)
        self.assertEqual(cfg.restarts, 5)
        self.assertEqual(cfg.seed, 9)
        self.assertEqual(cfg.max_sweeps, 7)
        self.assertEqual(cfg.as_dict()['max_sweeps'], 7)

    def test_objective(self):
        """Тест целевых функций"""
        self.assertEqual(Objective.bell(3).label, 'bell_3')
        self.assertEqual(Objective.omega().label, 'omega')
        with self.assertRaises(InvalidInputError):
            Objective.bell(0)
        with self.assertRaises(InvalidInputError):
            Objective('omega', 2)

    def test_result_best_is_max(self):
        """Тест: лучшее значение равно максимуму по стартам"""
        with self.assertRaises(InvalidInputError):
            OptimizeResult(0.5, ghz4_settings(), 1, (0.5, 0.7), Objective.bell(1))
        with self.assertRaises(InvalidInputError):
            OptimizeResult(0.5, ghz4_settings(), 1, (), Objective.bell(1))

    def test_restart_streams(self):
        """Тест: потоки стартов независимы и воспроизводимы"""
        cfg = OptimizeConfig(restarts=3, seed=4)
        first = [rng.random() for rng in restart_generators(cfg)]
        second = [rng.random() for rng in restart_generators(cfg)]
        self.assertEqual(first, second)
        self.assertEqual(len(set(first)), 3)


class GradientTests(SimpleTestCase):
    """Тесты для градиента по вектору направления"""

    @settings(deadline=None, max_examples=20)
    @given(seed=st.integers(0, 2 ** 32 - 1), i=st.integers(1, 4), slot=st.integers(0, 7))
    def test_matches_finite_differences(self, seed, i, slot):
        """Тест совпадения с конечными разностями"""
        rng = np.random.default_rng(seed)
        rho = random_mixture(rng, 2)
        settings_ = SettingSet.random(rng)
        which = SLOTS[slot]
        gradient = direction_gradient(rho, settings_, i, which)
        vectors = settings_.as_array()
        step = 1e-6
        for axis in range(3):
            moved = vectors.copy()
            moved[which.index][axis] += step
            estimate = (dense_value(rho, moved, i) - dense_value(rho, vectors, i)) / step
            self.assertLess(abs(estimate - gradient[axis]), 1e-5)

    def test_affine_decomposition(self):
        """Тест: значение равно c + g . v"""
        rng = np.random.default_rng(1)
        rho = pure_to_density(haar_random_pure(rng))
        settings_ = SettingSet.random(rng)
        which = SLOTS[5]
        gradient = direction_gradient(rho, settings_, 2, which)
        vectors = settings_.as_array()
        zeroed = vectors.copy()
        zeroed[which.index] = 0.0
        c = dense_value(rho, zeroed, 2)
        self.assertAlmostEqual(c + gradient @ vectors[which.index], bell_value(rho, settings_, 2), places=10)


class SphereMaximizerTests(SimpleTestCase):
    """Тесты максимизации квадратичной формы на сфере"""

    @settings(deadline=None, max_examples=30)
    @given(seed=st.integers(0, 2 ** 32 - 1))
    def test_beats_sampling(self, seed):
        """Тест: найденный вектор не хуже случайной выборки"""
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((4, 3))
        c = rng.standard_normal(4)
        m, h = g.T @ g, g.T @ c
        current = random_directions(rng, (1,))[0]
        v = maximize_quadratic_on_sphere(m, h, current)
        self.assertAlmostEqual(float(np.linalg.norm(v)), 1.0, places=12)
        samples = random_directions(rng, (20000,))
        sampled = np.max(np.einsum('ni,ij,nj->n', samples, m, samples) + 2 * samples @ h)
        self.assertGreaterEqual(float(v @ m @ v + 2 * h @ v), float(sampled) - 1e-9)

    def test_degenerate_keeps_current(self):
        """Тест: вырожденное главное подпространство без линейной части не меняет вектор"""
        current = np.array([0.6, 0.8, 0.0])
        v = maximize_quadratic_on_sphere(np.diag([1.0, 1.0, 0.0]), np.zeros(3), current)
        assert_allclose(v, current)

    def test_principal_eigenvector(self):
        """Тест: без линейной части выбирается главный собственный вектор"""
        current = np.array([0.0, -0.6, -0.8])
        v = maximize_quadratic_on_sphere(np.diag([0.1, 0.2, 3.0]), np.zeros(3), current)
        assert_allclose(v, [0.0, 0.0, -1.0], atol=1e-12)

    def test_linear_only(self):
        """Тест: при нулевой матрице вектор направлен вдоль h"""
        v = maximize_quadratic_on_sphere(np.zeros((3, 3)), np.array([0.0, 3.0, 4.0]), np.array([1.0, 0.0, 0.0]))
        assert_allclose(v, [0.0, 0.6, 0.8], atol=1e-9)

    def test_linear_part_in_top_eigenspace(self):
        """Тест: h вдоль главного собственного вектора"""
        current = np.array([1.0, 0.0, 0.0])
        v = maximize_quadratic_on_sphere(np.diag([0.0, 0.0, 4.0]), np.array([0.0, 0.0, 1.0]), current)
        assert_allclose(v, [0.0, 0.0, 1.0], atol=1e-9)
        v = maximize_quadratic_on_sphere(np.diag([0.0, 0.0, 4.0]), np.array([0.0, 0.0, -0.1]), current)
        assert_allclose(v, [0.0, 0.0, -1.0], atol=1e-9)

    @settings(deadline=None, max_examples=50)
    @given(
        seed=st.integers(0, 2 ** 32 - 1),
        scale=st.floats(1e-3, 1e3),
        sign=st.sampled_from((-1.0, 1.0)),
    )
    def test_rotated_linear_part_in_top_eigenspace(self, seed, scale, sign):
        """Тест: h вдоль главного собственного вектора в повёрнутом базисе"""
        rng = np.random.default_rng(seed)
        basis, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        eigenvalues = np.array([rng.uniform(-4.0, 0.0), rng.uniform(0.0, 1.0), rng.uniform(2.0, 4.0)])
        m = basis @ np.diag(eigenvalues) @ basis.T
        m = (m + m.T) / 2
        top = basis[:, 2]
        v = maximize_quadratic_on_sphere(m, sign * scale * top, random_directions(rng, (1,))[0])
        assert_allclose(v, sign * top, atol=1e-7)


class SeesawBellTests(SimpleTestCase):
    """Тесты see-saw оптимизации |<D_4^(i)>|"""

    def test_ghz_reaches_two(self):
        """Тест: для GHZ_4 достигается 2"""
        cfg = OptimizeConfig(restarts=24, max_sweeps=300, seed=0)
        for i in (1, 3):
            result = seesaw_bell(ghz4(), i, cfg)
            self.assertGreaterEqual(result.best_value, 2.0 - 1e-4)
            self.assertLessEqual(result.best_value, 2.0 + 1e-8)
            self.assertAlmostEqual(abs(bell_value(ghz4(), result.best_settings, i)), result.best_value, places=10)

    def test_seeded_ghz_stays_at_two(self):
        """Тест: старт из оптимальных настроек сохраняет значение 2"""
        result = seesaw_bell(ghz4(), 1, OptimizeConfig(restarts=2, seed=1), initial=ghz4_settings())
        self.assertGreaterEqual(result.restart_values[0], 2.0 - 1e-12)

    def test_zero_state_reaches_one(self):
        """Тест: для |0000> максимум равен 1"""
        result = seesaw_bell(zero4(), 2, OptimizeConfig(restarts=8, seed=2))
        self.assertGreaterEqual(result.best_value, 1.0 - 1e-4)
        self.assertLessEqual(result.best_value, 1.0 + 1e-8)

    @tag('slow')
    def test_generalized_ghz_detected(self):
        """Тест: обобщённый GHZ нарушает границу 1 при всех alpha > 0"""
        cfg = OptimizeConfig(restarts=16, seed=0)
        rho = pure_to_density(generalized_ghz(0.0))
        self.assertLess(abs(max(seesaw_bell(rho, i, cfg).best_value for i in QUBITS) - 1.0), 1e-6)
        for alpha in np.linspace(np.pi / 120, np.pi / 4, 30):
            rho = pure_to_density(generalized_ghz(alpha))
            best = 0.0
            for i in QUBITS:
                best = max(best, seesaw_bell(rho, i, cfg).best_value)
                if best > 1.0 + 1e-4:
                    break
            self.assertGreater(best, 1.0 + 1e-4, f'alpha = {alpha!r}')

    def test_schmidt_pair_within_one(self):
        """Тест: пара Шмидта на кубитах 1, 2 не превышает 1 для D_4^(1)"""
        rho = pure_to_density(product([(schmidt_pair(np.pi / 4), (1, 2)), (basis_state('00'), (3, 4))]))
        result = seesaw_bell(rho, 1, OptimizeConfig(restarts=8, seed=3))
        self.assertLessEqual(result.best_value, 1.0 + 1e-6)
        self.assertGreaterEqual(result.best_value, 1.0 - 1e-4)

    def test_maximally_mixed(self):
        """Тест: для I/16 все значения равны нулю"""
        result = seesaw_bell(DensityMatrix.maximally_mixed(), 4, OptimizeConfig(restarts=2))
        self.assertAlmostEqual(result.best_value, 0.0, places=12)

    def test_deterministic_and_thread_independent(self):
        """Тест воспроизводимости и независимости от числа потоков"""
        rho = random_mixture(21, 2)
        first = seesaw_bell(rho, 3, OptimizeConfig(restarts=4, seed=5))
        second = seesaw_bell(rho, 3, OptimizeConfig(restarts=4, seed=5))
        threaded = seesaw_bell(rho, 3, OptimizeConfig(restarts=4, seed=5, threads=3))
        self.assertEqual(first.best_value, second.best_value)
        self.assertEqual(first.restart_values, threaded.restart_values)
        assert_allclose(first.best_settings.as_array(), threaded.best_settings.as_array())

    def test_result_shape(self):
        """Тест полей результата"""
        result = seesaw_bell(random_mixture(22, 3), 2, OptimizeConfig(restarts=3, seed=6, max_sweeps=50))
        self.assertEqual(len(result.restart_values), 3)
        self.assertEqual(len(result.restart_sweeps), 3)
        self.assertEqual(result.best_value, max(result.restart_values))
        self.assertLessEqual(result.sweeps_used, 50)
        self.assertEqual(result.objective, Objective.bell(2))


class SeesawOmegaTests(SimpleTestCase):
    """Тесты see-saw оптимизации omega"""

    def test_seeded_ghz_exceeds_four(self):
        """Тест: omega на GHZ_4 из известных настроек не меньше 7"""
        with self.assertLogs('apps.optimize.utils', level='WARNING'):
            result = seesaw_omega(ghz4(), OptimizeConfig(restarts=2, seed=0), initial=ghz4_settings())
        self.assertGreaterEqual(result.restart_values[0], 7.0 - 1e-9)
        self.assertLessEqual(result.best_value, 16.0 + 1e-8)
        self.assertAlmostEqual(omega(ghz4(), result.best_settings), result.best_value, places=10)

    def test_random_state_bounds(self):
        """Тест: omega не превышает 16 и согласуется с плотным вычислением"""
        rho = pure_to_density(haar_random_pure(31))
        result = seesaw_omega(rho, OptimizeConfig(restarts=4, seed=7))
        self.assertLessEqual(result.best_value, 16.0 + 1e-8)
        self.assertAlmostEqual(omega(rho, result.best_settings), result.best_value, places=10)
        self.assertEqual(result.objective, Objective.omega())

    def test_omega_dominates_single_operator(self):
        """Тест: omega не меньше квадрата значения D_4^(i) в найденной точке"""
        rho = zero4()
        result = seesaw_omega(rho, OptimizeConfig(restarts=4, seed=8))
        for i in QUBITS:
            self.assertGreaterEqual(result.best_value + 1e-12, bell_value(rho, result.best_settings, i) ** 2)
        self.assertGreaterEqual(result.best_value, 1.0 - 1e-6)

    def test_maximally_mixed(self):
        """Тест: omega для I/16 равна нулю"""
        result = seesaw_omega(DensityMatrix.maximally_mixed(), OptimizeConfig(restarts=2))
        self.assertAlmostEqual(result.best_value, 0.0, places=12)

    def test_zero_state(self):
        """Тест: omega для |0000> из настроек вдоль z равна 4"""
        rho = zero4()
        result = seesaw_omega(rho, OptimizeConfig(restarts=8, seed=0), initial=SettingSet.uniform(Z_AXIS))
        self.assertGreaterEqual(result.restart_values[0], 4.0 - 1e-9)
        self.assertLessEqual(result.best_value, 4.0 + 1e-6)
        result = seesaw_omega(rho, OptimizeConfig())
        self.assertLessEqual(result.best_value, 4.0 + 1e-6)


class GridTests(SimpleTestCase):
    """Тесты для перебора по сетке"""

    def test_grid_angles(self):
        """Тест сетки углов"""
        self.assertEqual(grid_angles(15).shape, (24,))
        for resolution in (7, 120, 0):
            with self.assertRaises(InvalidInputError):
                grid_angles(resolution)

    def test_grid_directions(self):
        """Тест направлений в плоскости"""
        directions = grid_directions(grid_angles(90), 'xz')
        assert_allclose(directions, [[1, 0, 0], [0, 0, 1], [-1, 0, 0], [0, 0, -1]], atol=1e-15)
        with self.assertRaises(InvalidInputError):
            grid_directions(grid_angles(90), 'xw')

    def test_budget(self):
        """Тест ограничения размера сетки"""
        self.assertEqual(grid_size(15), 24 ** 6)
        with self.assertRaises(InvalidInputError):
            grid_search(ghz4(), 1, resolution_deg=10)
        with self.assertRaises(InvalidInputError):
            grid_search(ghz4(), 1, resolution_deg=30, budget=1000)

    def test_ghz_grid(self):
        """Тест: сетка в плоскости xy находит значение 2 для GHZ_4"""
        for i in (1, 4):
            self.assertGreaterEqual(grid_oracle(ghz4(), i), 1.99)

    def test_zero_state_grid(self):
        """Тест: сетка в плоскости xz для |0000> даёт 1"""
        value = grid_oracle(zero4(), 2, plane='xz')
        self.assertLess(abs(value - 1.0), 0.02)

    def test_grid_settings_reproduce_value(self):
        """Тест: найденные настройки воспроизводят значение"""
        rho = pure_to_density(haar_random_pure(41))
        value, settings_ = grid_search(rho, 3, resolution_deg=30, plane='xz')
        self.assertAlmostEqual(abs(bell_value(rho, settings_, 3)), value, places=10)
        assert_allclose(settings_.as_array()[:, :, 1], 0.0, atol=1e-15)

    def test_seesaw_from_grid_not_worse(self):
        """Тест: see-saw из точки сетки не хуже сетки"""
        rho = pure_to_density(haar_random_pure(42))
        value, settings_ = grid_search(rho, 1, resolution_deg=30, plane='xy')
        result = seesaw_bell(rho, 1, OptimizeConfig(restarts=2, seed=3), initial=settings_)
        self.assertGreaterEqual(result.restart_values[0], value - 1e-10)
        self.assertGreaterEqual(result.best_value, value - 1e-10)
