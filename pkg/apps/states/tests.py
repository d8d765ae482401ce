import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import DensityMatrix, PureState
from apps.qubits.utils import basis_state, partial_trace, pure_to_density, purity, tensor_states

from .models import SWEEP_DEFAULTS, SWEEPABLE, FamilySpec, MixtureSpec, SpecPart, check_range
from .samplers import parse_partition, sample_member, sample_pure_member
from .serializers import StateSpecSerializer
from .utils import (
    apply_local_unitaries_to_pure,
    build_density,
    build_state,
    generalized_ghz,
    ghz_normalization,
    ghz_type3,
    haar_random_pure,
    product,
    product_density,
    random_mixture,
    schmidt_pair,
    swept_spec,
    w_type3,
)


def parse(data):
    serializer = StateSpecSerializer(data=data)
    valid = serializer.is_valid()
    return valid, serializer


class FamilyTests(SimpleTestCase):
    """Тесты для семейств состояний"""

    def test_generalized_ghz_endpoints(self):
        """Тест: alpha = 0 даёт |0000>, alpha = pi/4 даёт GHZ_4"""
        self.assertTrue(generalized_ghz(0.0).allclose(basis_state('0000')))
        ghz = generalized_ghz(np.pi / 4)
        self.assertAlmostEqual(abs(ghz.amplitudes[0]), 1 / np.sqrt(2), places=14)
        self.assertAlmostEqual(abs(ghz.amplitudes[15]), 1 / np.sqrt(2), places=14)

    def test_generalized_ghz_range(self):
        """Тест отклонения alpha вне [0, pi/4]"""
        with self.assertRaises(InvalidInputError):
            generalized_ghz(np.pi / 3)
        with self.assertRaises(InvalidInputError):
            generalized_ghz(-0.1)

    def test_schmidt_pair(self):
        """Тест пары Шмидта cos|01> - sin|10>"""
        assert_allclose(schmidt_pair(np.pi / 4).amplitudes, [0, 1 / np.sqrt(2), -1 / np.sqrt(2), 0], atol=1e-15)
        with self.assertRaises(InvalidInputError):
            schmidt_pair(float('inf'))

    def test_ghz_type3_reduces_to_ghz3(self):
        """Тест: при alpha = beta = gamma = pi/2, phi = 0, delta = pi/4 получаем GHZ_3"""
        psi = ghz_type3(np.pi / 4, np.pi / 2, np.pi / 2, np.pi / 2, 0.0)
        expected = PureState(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / np.sqrt(2))
        self.assertTrue(psi.allclose(expected, atol=1e-12))

    @settings(deadline=None, max_examples=40)
    @given(
        delta=st.floats(0.01, np.pi / 4),
        alpha=st.floats(0.3, np.pi / 2),
        beta=st.floats(0.3, np.pi / 2),
        gamma=st.floats(0.3, np.pi / 2),
        phi=st.floats(0.0, 6.28),
    )
    def test_ghz_type3_normalization(self, delta, alpha, beta, gamma, phi):
        """Тест: 1/K равно квадрату нормы ненормированного вектора"""
        local = [np.array([np.cos(x), np.sin(x)]) for x in (alpha, beta, gamma)]
        raw = np.sin(delta) * np.exp(1j * phi) * np.kron(np.kron(local[0], local[1]), local[2])
        raw[0] += np.cos(delta)
        k = ghz_normalization(delta, alpha, beta, gamma, phi)
        self.assertAlmostEqual(1.0 / k, float(np.vdot(raw, raw).real), places=12)
        self.assertAlmostEqual(float(np.linalg.norm(ghz_type3(delta, alpha, beta, gamma, phi).amplitudes)), 1.0, places=12)

    def test_ghz_type3_ranges(self):
        """Тест отклонения параметров вне допустимых интервалов"""
        with self.assertRaises(InvalidInputError):
            ghz_type3(0.0, 1.0, 1.0, 1.0, 0.0)
        with self.assertRaises(InvalidInputError):
            ghz_type3(0.5, 1.0, 1.0, 1.0, 2 * np.pi)
        with self.assertRaises(InvalidInputError):
            ghz_type3(0.5, 2.0, 1.0, 1.0, 0.0)

    def test_w_type3_amplitudes(self):
        """Тест амплитуд W-состояния"""
        psi = w_type3(0.1, 0.2, 0.3)
        expected = np.zeros(8)
        expected[[0, 1, 2, 4]] = np.sqrt([0.4, 0.1, 0.2, 0.3])
        assert_allclose(psi.amplitudes, expected, atol=1e-15)

    def test_w_type3_ranges(self):
        """Тест отклонения весов W-состояния"""
        with self.assertRaises(InvalidInputError):
            w_type3(0.5, 0.4, 0.3)
        with self.assertRaises(InvalidInputError):
            w_type3(0.0, 0.4, 0.3)

    def test_check_range_bounds(self):
        """Тест открытых и закрытых границ интервала"""
        self.assertEqual(check_range('x', 1.0, 0.0, 1.0), 1.0)
        with self.assertRaises(InvalidInputError):
            check_range('x', 1.0, 0.0, 1.0, high_open=True)
        with self.assertRaises(InvalidInputError):
            check_range('x', float('nan'), 0.0, 1.0)


class ProductTests(SimpleTestCase):
    """Тесты для произведений состояний"""

    def test_parts_land_on_slots(self):
        """Тест размещения частей по заданным кубитам"""
        psi = product([(basis_state('1'), (3,)), (basis_state('010'), (1, 2, 4))])
        self.assertTrue(psi.allclose(basis_state('0110')))

    def test_slots_must_partition(self):
        """Тест отклонения перекрывающихся кубитов"""
        with self.assertRaises(InvalidInputError):
            product([(basis_state('00'), (1, 2)), (basis_state('00'), (2, 3))])
        with self.assertRaises(InvalidInputError):
            product([(basis_state('00'), (1,)), (basis_state('000'), (2, 3, 4))])

    def test_product_marginals_pure(self):
        """Тест: маргиналы частей произведения чистые"""
        rng = np.random.default_rng(0)
        pair = haar_random_pure(rng, 2)
        psi = product([(pair, (1, 4)), (haar_random_pure(rng, 2), (2, 3))])
        reduced = partial_trace(pure_to_density(psi), [1, 4])
        self.assertAlmostEqual(purity(reduced), 1.0, places=12)
        self.assertTrue(reduced.allclose(pure_to_density(pair), atol=1e-12))

    def test_product_density_matches_pure(self):
        """Тест согласованности произведения матриц плотности"""
        rng = np.random.default_rng(1)
        parts = [(haar_random_pure(rng, 1), (4,)), (haar_random_pure(rng, 3), (2, 1, 3))]
        expected = pure_to_density(product(parts))
        actual = product_density([(pure_to_density(state), slots) for state, slots in parts])
        self.assertTrue(actual.allclose(expected, atol=1e-12))


class RandomStateTests(SimpleTestCase):
    """Тесты для случайных состояний"""

    def test_haar_reproducible(self):
        """Тест воспроизводимости по зерну"""
        self.assertTrue(haar_random_pure(42).allclose(haar_random_pure(42)))
        self.assertFalse(haar_random_pure(42).allclose(haar_random_pure(43)))

    def test_mixture_terms_bounds(self):
        """Тест ограничения числа слагаемых смеси"""
        with self.assertRaises(InvalidInputError):
            random_mixture(0, 5)
        with self.assertRaises(InvalidInputError):
            random_mixture(0, 0)

    def test_mixture_rank(self):
        """Тест: смесь k состояний имеет ранг k"""
        rho = random_mixture(3, 3)
        eigenvalues = np.linalg.eigvalsh(rho.matrix)
        self.assertEqual(int(np.sum(eigenvalues > 1e-10)), 3)

    def test_local_unitaries_on_pure(self):
        """Тест применения локальных унитарных к чистому состоянию"""
        flip = np.array([[0, 1], [1, 0]], dtype=complex)
        psi = apply_local_unitaries_to_pure(basis_state('00'), [flip, np.eye(2)])
        self.assertTrue(psi.allclose(basis_state('10')))
        with self.assertRaises(InvalidInputError):
            apply_local_unitaries_to_pure(basis_state('00'), [flip])


class SamplerTests(SimpleTestCase):
    """Тесты для генераторов членов классов"""

    def test_parse_partition(self):
        """Тест разбора меток разбиения"""
        self.assertEqual(parse_partition('12-3-4'), ((1, 2), (3,), (4,)))
        self.assertEqual(parse_partition('3-124'), ((1, 2, 4), (3,)))
        self.assertEqual(parse_partition('fully_separable'), ((1,), (2,), (3,), (4,)))
        self.assertEqual(parse_partition('genuine'), ((1, 2, 3, 4),))
        for label in ('12-34-1', '12-3', 'ab', '12--34'):
            with self.assertRaises(InvalidInputError):
                parse_partition(label)

    def test_pure_members_factorize(self):
        """Тест: каждый блок члена класса находится в чистом состоянии"""
        rng = np.random.default_rng(2)
        for label in ('1-2-3-4', '12-3-4', '14-23', '1-234', '3-124'):
            blocks = parse_partition(label)
            rho = pure_to_density(sample_pure_member(blocks, rng))
            for block in blocks:
                self.assertAlmostEqual(purity(partial_trace(rho, block)), 1.0, places=10)

    def test_mixed_members(self):
        """Тест смесей членов одного класса"""
        rng = np.random.default_rng(3)
        rho = sample_member('12-34', rng, terms=3)
        self.assertIsInstance(rho, DensityMatrix)
        self.assertLess(purity(rho), 1.0)
        with self.assertRaises(InvalidInputError):
            sample_member('12-34', rng, terms=0)

    def test_genuine_candidates_are_pure(self):
        """Тест: кандидаты в истинно запутанные состояния чистые"""
        rng = np.random.default_rng(4)
        for _ in range(6):
            self.assertAlmostEqual(purity(sample_member('genuine', rng)), 1.0, places=10)


class BuildStateTests(SimpleTestCase):
    """Тесты построения состояний по описаниям"""

    def test_family(self):
        """Тест семейства gghz"""
        rho = build_density(FamilySpec('gghz', {'alpha': np.pi / 4}))
        self.assertTrue(rho.allclose(pure_to_density(generalized_ghz(np.pi / 4))))

    def test_family_parameters_checked(self):
        """Тест проверки набора параметров семейства"""
        with self.assertRaises(InvalidInputError):
            FamilySpec('gghz', {})
        with self.assertRaises(InvalidInputError):
            FamilySpec('gghz', {'alpha': 0.1, 'beta': 0.2})
        with self.assertRaises(InvalidInputError):
            FamilySpec('unknown')
        with self.assertRaises(InvalidInputError):
            FamilySpec('product')

    def test_product_with_mixed_part(self):
        """Тест произведения со смешанной частью"""
        spec = FamilySpec('product', parts=(
            SpecPart(FamilySpec('maximally_mixed'), (1, 2, 3, 4)),
        ))
        self.assertTrue(build_density(spec).allclose(DensityMatrix.maximally_mixed()))
        spec = FamilySpec('product', parts=(
            SpecPart(FamilySpec('basis', {'label': '0'}), (1,)),
            SpecPart(FamilySpec('w3', {'a': 0.2, 'b': 0.3, 'c': 0.4}), (2, 3, 4)),
        ))
        expected = pure_to_density(tensor_states([basis_state('0'), w_type3(0.2, 0.3, 0.4)]))
        self.assertTrue(build_density(spec).allclose(expected, atol=1e-12))

    def test_mixture_spec(self):
        """Тест явной смеси"""
        spec = MixtureSpec((
            SpecPart(FamilySpec('basis', {'label': '0000'}), p=0.5),
            SpecPart(FamilySpec('basis', {'label': '1111'}), p=0.5),
        ))
        rho = build_state(spec)
        self.assertAlmostEqual(purity(rho), 0.5, places=14)

    def test_three_qubit_state_is_not_a_density(self):
        """Тест: трёхкубитное состояние не подходит для операторов Белла"""
        with self.assertRaises(InvalidInputError):
            build_density(FamilySpec('w3', {'a': 0.2, 'b': 0.3, 'c': 0.4}))

    def test_swept_spec(self):
        """Тест замены одного параметра"""
        spec = FamilySpec('ghz3', dict(SWEEP_DEFAULTS['ghz3']))
        moved = swept_spec(spec, 'delta', 0.3)
        self.assertEqual(moved.params['delta'], 0.3)
        self.assertEqual(moved.params['alpha'], spec.params['alpha'])
        with self.assertRaises(InvalidInputError):
            swept_spec(spec, 'omega', 0.3)
        self.assertEqual(set(SWEEPABLE), {'gghz', 'schmidt_pair', 'ghz3', 'w3'})


class StateSpecSerializerTests(SimpleTestCase):
    """Тесты для сериализатора описаний состояний"""

    def test_family(self):
        """Тест описания семейства"""
        valid, serializer = parse({'type': 'family', 'name': 'gghz', 'params': {'alpha': 0.5}})
        self.assertTrue(valid, serializer.errors)
        spec = serializer.save()
        self.assertEqual(spec, FamilySpec('gghz', {'alpha': 0.5}))
        self.assertEqual(
            StateSpecSerializer(spec).data,
            {'type': 'family', 'name': 'gghz', 'params': {'alpha': 0.5}},
        )

    def test_nested_product(self):
        """Тест вложенного произведения"""
        valid, serializer = parse({
            'type': 'family',
            'name': 'product',
            'parts': [
                {'slots': [1], 'state': {'type': 'family', 'name': 'basis', 'params': {'label': '0'}}},
                {'slots': [2, 3, 4], 'state': {'type': 'family', 'name': 'ghz3', 'params': {
                    'delta': 0.7853981633974483, 'alpha': 1.5707963267948966,
                    'beta': 1.5707963267948966, 'gamma': 1.5707963267948966, 'phi': 0,
                }}},
            ],
        })
        self.assertTrue(valid, serializer.errors)
        rho = build_density(serializer.save())
        self.assertAlmostEqual(purity(rho), 1.0, places=12)

    def test_pure_amplitudes(self):
        """Тест явных амплитуд"""
        amplitudes = [[0.0, 0.0]] * 16
        amplitudes[0] = [0.6, 0.0]
        amplitudes[15] = [0.0, 0.8]
        valid, serializer = parse({'type': 'pure', 'amplitudes': amplitudes})
        self.assertTrue(valid, serializer.errors)
        psi = build_state(serializer.save())
        self.assertAlmostEqual(psi.amplitudes[15], 0.8j, places=14)

    def test_unnormalized_amplitudes(self):
        """Тест отклонения ненормированных амплитуд"""
        valid, serializer = parse({'type': 'pure', 'amplitudes': [[1.0, 0.0]] * 16})
        self.assertFalse(valid)

    def test_mixed(self):
        """Тест смеси с вложенными состояниями"""
        valid, serializer = parse({'type': 'mixed', 'terms': [
            {'p': 0.5, 'state': {'type': 'family', 'name': 'basis', 'params': {'label': '0000'}}},
            {'p': 0.5, 'state': {'type': 'family', 'name': 'maximally_mixed'}},
        ]})
        self.assertTrue(valid, serializer.errors)
        spec = serializer.save()
        self.assertIsInstance(spec, MixtureSpec)
        self.assertEqual(StateSpecSerializer(spec).data['terms'][0]['p'], 0.5)

    def test_invalid_weight(self):
        """Тест отклонения отрицательного веса"""
        valid, serializer = parse({'type': 'mixed', 'terms': [
            {'p': -0.5, 'state': {'type': 'family', 'name': 'maximally_mixed'}},
        ]})
        self.assertFalse(valid)
        self.assertIn('terms', serializer.errors)

    def test_unknown_family(self):
        """Тест отклонения неизвестного семейства"""
        valid, _ = parse({'type': 'family', 'name': 'cluster', 'params': {}})
        self.assertFalse(valid)

    def test_parameter_types(self):
        """Тест проверки типов параметров"""
        self.assertFalse(parse({'type': 'family', 'name': 'gghz', 'params': {'alpha': 'x'}})[0])
        self.assertFalse(parse({'type': 'family', 'name': 'haar_pure', 'params': {'seed': 1.5}})[0])
        self.assertFalse(parse({'type': 'family', 'name': 'basis', 'params': {'label': 1}})[0])
        valid, serializer = parse({'type': 'family', 'name': 'haar_pure', 'params': {'seed': 3}})
        self.assertTrue(valid, serializer.errors)
        self.assertTrue(build_state(serializer.save()).allclose(haar_random_pure(3)))

    def test_missing_fields(self):
        """Тест обязательных полей для каждого вида"""
        self.assertFalse(parse({'type': 'pure'})[0])
        self.assertFalse(parse({'type': 'mixed'})[0])
        self.assertFalse(parse({'type': 'family'})[0])
        self.assertFalse(parse({'type': 'other'})[0])
