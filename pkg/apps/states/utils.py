from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from apps.qubits.exceptions import InvalidInputError, NumericalInvariantError
from apps.qubits.models import MAX_QUBITS, DensityMatrix, PureState
from apps.qubits.utils import (
    basis_state,
    is_unitary,
    kron_all,
    mix,
    permute_density,
    permute_qubits,
    pure_to_density,
    tensor_states,
)

from .models import (
    MAX_MIXTURE_TERMS,
    AmplitudeSpec,
    FamilySpec,
    MixtureSpec,
    StateSpec,
    check_range,
)


def generalized_ghz(alpha: float) -> PureState:
    """cos(alpha)|0000> + sin(alpha)|1111>, 0 <= alpha <= pi/4."""
    alpha = check_range('alpha', alpha, 0.0, np.pi / 4)
    amplitudes = np.zeros(16, dtype=complex)
    amplitudes[0] = np.cos(alpha)
    amplitudes[15] = np.sin(alpha)
    return PureState(amplitudes)


def schmidt_pair(alpha: float) -> PureState:
    """cos(alpha)|01> - sin(alpha)|10>."""
    alpha = float(alpha)
    if not np.isfinite(alpha):
        raise InvalidInputError(f'alpha = {alpha!r} is not finite')
    return PureState([0.0, np.cos(alpha), -np.sin(alpha), 0.0])


def ghz_normalization(delta: float, alpha: float, beta: float, gamma: float, phi: float) -> float:
    """K = 1 / (1 + 2 c_delta s_delta c_alpha c_beta c_gamma c_phi)."""
    denominator = 1.0 + 2.0 * (
        np.cos(delta) * np.sin(delta) * np.cos(alpha) * np.cos(beta) * np.cos(gamma) * np.cos(phi)
    )
    if denominator <= 0.0:
        raise NumericalInvariantError(f'GHZ-type normalization is undefined (denominator {denominator!r})')
    return float(1.0 / denominator)


def ghz_type3(delta: float, alpha: float, beta: float, gamma: float, phi: float) -> PureState:
    """
    sqrt(K) (c_delta |000> + s_delta e^{i phi} |phi_A phi_B phi_C>) with
    |phi_X> = cos(x)|0> + sin(x)|1>.

    Ranges: delta in (0, pi/4], alpha, beta, gamma in (0, pi/2], phi in [0, 2 pi).
    """
    delta = check_range('delta', delta, 0.0, np.pi / 4, low_open=True)
    alpha = check_range('alpha', alpha, 0.0, np.pi / 2, low_open=True)
    beta = check_range('beta', beta, 0.0, np.pi / 2, low_open=True)
    gamma = check_range('gamma', gamma, 0.0, np.pi / 2, low_open=True)
    phi = check_range('phi', phi, 0.0, 2 * np.pi, high_open=True)

    k = ghz_normalization(delta, alpha, beta, gamma, phi)
    local = [np.array([np.cos(x), np.sin(x)]) for x in (alpha, beta, gamma)]
    product_part = np.kron(np.kron(local[0], local[1]), local[2])
    amplitudes = np.sin(delta) * np.exp(1j * phi) * product_part
    amplitudes[0] += np.cos(delta)
    amplitudes *= np.sqrt(k)

    norm = float(np.linalg.norm(amplitudes))
    if abs(norm - 1.0) > 1e-12:
        raise NumericalInvariantError(f'GHZ-type state has norm {norm!r} after normalization')
    return PureState(amplitudes)


def w_type3(a: float, b: float, c: float) -> PureState:
    """sqrt(a)|001> + sqrt(b)|010> + sqrt(c)|100> + sqrt(d)|000>, d = 1 - a - b - c."""
    a = check_range('a', a, 0.0, 1.0, low_open=True)
    b = check_range('b', b, 0.0, 1.0, low_open=True)
    c = check_range('c', c, 0.0, 1.0, low_open=True)
    d = 1.0 - (a + b + c)
    if d < -1e-12:
        raise InvalidInputError(f'a + b + c = {a + b + c!r} exceeds 1')
    amplitudes = np.zeros(8, dtype=complex)
    amplitudes[0] = np.sqrt(max(d, 0.0))
    amplitudes[1] = np.sqrt(a)
    amplitudes[2] = np.sqrt(b)
    amplitudes[4] = np.sqrt(c)
    return PureState(amplitudes)


def _slot_order(slot_groups: Sequence[Sequence[int]], sizes: Sequence[int]) -> tuple[int, ...]:
    order = []
    for slots, size in zip(slot_groups, sizes):
        slots = [int(q) for q in slots]
        if len(slots) != size:
            raise InvalidInputError(f'Part of {size} qubits placed on {len(slots)} slots {slots}')
        order.extend(slots)
    if sorted(order) != list(range(1, MAX_QUBITS + 1)):
        raise InvalidInputError(f'Slots {order} do not partition qubits 1..{MAX_QUBITS}')
    return tuple(order)


def product(parts: Sequence[tuple[PureState, Sequence[int]]]) -> PureState:
    """
    Tensor product of pure parts, each placed on its slots. The k-th qubit
    of a part lands on that part's k-th slot.
    """
    if not parts:
        raise InvalidInputError('A product needs at least one part')
    order = _slot_order([slots for _, slots in parts], [state.num_qubits for state, _ in parts])
    return permute_qubits(tensor_states([state for state, _ in parts]), order)


def product_density(parts: Sequence[tuple[DensityMatrix, Sequence[int]]]) -> DensityMatrix:
    """Density-matrix counterpart of `product`, for mixed parts."""
    if not parts:
        raise InvalidInputError('A product needs at least one part')
    order = _slot_order([slots for _, slots in parts], [rho.num_qubits for rho, _ in parts])
    matrix = np.ones((1, 1), dtype=complex)
    for rho, _ in parts:
        matrix = np.kron(matrix, rho.matrix)
    return permute_density(DensityMatrix(matrix), order)


def haar_amplitudes(rng: np.random.Generator, dim: int) -> np.ndarray:
    amplitudes = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return amplitudes / np.linalg.norm(amplitudes)


def haar_random_pure(seed: int | np.random.Generator, num_qubits: int = MAX_QUBITS) -> PureState:
    """Unitarily invariant random pure state: normalized complex Gaussian amplitudes."""
    if not 1 <= int(num_qubits) <= MAX_QUBITS:
        raise InvalidInputError(f'num_qubits = {num_qubits} outside 1..{MAX_QUBITS}')
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return PureState(haar_amplitudes(rng, 2 ** int(num_qubits)))


def random_mixture(seed: int | np.random.Generator, terms: int, num_qubits: int = MAX_QUBITS) -> DensityMatrix:
    """Dirichlet-uniform convex combination of `terms` Haar pure states."""
    terms = int(terms)
    if not 1 <= terms <= MAX_MIXTURE_TERMS:
        raise InvalidInputError(f'terms = {terms} outside 1..{MAX_MIXTURE_TERMS}')
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    states = [haar_random_pure(rng, num_qubits) for _ in range(terms)]
    # Dirichlet draws can underflow to exactly 0 for large k; renormalize the kept terms
    kept = [(float(p), state) for p, state in zip(weights, states) if p > 0.0]
    total = sum(p for p, _ in kept)
    return mix([(p / total, state) for p, state in kept])


def apply_local_unitaries_to_pure(psi: PureState, u: Sequence[np.ndarray]) -> PureState:
    """(u_1 x ... x u_n) |psi> with one 2x2 unitary per qubit."""
    if len(u) != psi.num_qubits:
        raise InvalidInputError(f'Expected {psi.num_qubits} single-qubit unitaries, got {len(u)}')
    for qubit, factor in enumerate(u, start=1):
        factor = np.asarray(factor, dtype=complex)
        if factor.shape != (2, 2) or not is_unitary(factor):
            raise InvalidInputError(f'Factor on qubit {qubit} is not a 2x2 unitary')
    return PureState(kron_all(u) @ psi.amplitudes)


def _build_family(spec: FamilySpec) -> PureState | DensityMatrix:
    params = spec.params
    if spec.name == 'gghz':
        return generalized_ghz(params['alpha'])
    if spec.name == 'schmidt_pair':
        return schmidt_pair(params['alpha'])
    if spec.name == 'ghz3':
        return ghz_type3(params['delta'], params['alpha'], params['beta'], params['gamma'], params['phi'])
    if spec.name == 'w3':
        return w_type3(params['a'], params['b'], params['c'])
    if spec.name == 'haar_pure':
        return haar_random_pure(int(params['seed']))
    if spec.name == 'mixture':
        return random_mixture(int(params['seed']), int(params['terms']))
    if spec.name == 'maximally_mixed':
        return DensityMatrix.maximally_mixed()
    if spec.name == 'basis':
        return basis_state(str(params['label']))
    # product
    built = [(build_state(part.spec), part.slots) for part in spec.parts]
    if all(isinstance(state, PureState) for state, _ in built):
        return product(built)
    return product_density([
        (pure_to_density(state) if isinstance(state, PureState) else state, slots)
        for state, slots in built
    ])


def build_state(spec: StateSpec) -> PureState | DensityMatrix:
    """Pure or mixed state described by a validated state spec."""
    if isinstance(spec, AmplitudeSpec):
        return PureState(spec.amplitudes)
    if isinstance(spec, MixtureSpec):
        return mix([(part.p, build_state(part.spec)) for part in spec.terms])
    if isinstance(spec, FamilySpec):
        return _build_family(spec)
    raise InvalidInputError(f'Unsupported state spec {type(spec).__name__}')


def build_density(spec: StateSpec) -> DensityMatrix:
    """Four-qubit density matrix for a state spec."""
    state = build_state(spec)
    rho = pure_to_density(state) if isinstance(state, PureState) else state
    if rho.num_qubits != MAX_QUBITS:
        raise InvalidInputError(f'Expected a {MAX_QUBITS}-qubit state, got {rho.num_qubits} qubits')
    return rho


def swept_spec(spec: FamilySpec, param: str, value: float) -> FamilySpec:
    """Copy of `spec` with one scalar parameter replaced."""
    if param not in spec.params:
        raise InvalidInputError(f'Family {spec.name!r} has no parameter {param!r}')
    return spec.with_param(param, value)
