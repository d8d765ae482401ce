from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .exceptions import InvalidInputError, NumericalInvariantError
from .models import (
    MAX_DIM,
    MAX_QUBITS,
    UNIT_NORM_ATOL,
    DensityMatrix,
    PureState,
    UnitVector3,
    qubit_count,
)


OPERATOR_HERMITIAN_ATOL = 1e-12
IMAGINARY_RESIDUE_ATOL = 1e-10
MIX_WEIGHT_ATOL = 1e-9

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
# +i in the (2,1) entry
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
# Identity first, so index mu = 0..3 follows the correlation-tensor labels
PAULI_BASIS = np.stack([IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z])

for _matrix in (IDENTITY2, *PAULIS, PAULI_BASIS):
    _matrix.setflags(write=False)


def _square_dim(matrix: np.ndarray, name: str = 'matrix') -> int:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInputError(f'{name} must be square, got shape {matrix.shape}')
    return matrix.shape[0]


def is_hermitian(matrix: np.ndarray, atol: float = OPERATOR_HERMITIAN_ATOL) -> bool:
    matrix = np.asarray(matrix)
    _square_dim(matrix)
    return bool(np.allclose(matrix, matrix.conj().T, atol=atol, rtol=0.0))


def is_unitary(matrix: np.ndarray, atol: float = 1e-10) -> bool:
    matrix = np.asarray(matrix, dtype=complex)
    dim = _square_dim(matrix)
    return bool(np.allclose(matrix.conj().T @ matrix, np.eye(dim), atol=atol, rtol=0.0))


def direction_matrix(vector) -> np.ndarray:
    """
    v . sigma for any real 3-vector, unit or not. The see-saw probes and the
    multilinearity checks evaluate operators at non-unit vectors.
    """
    vector = np.asarray(vector, dtype=float)
    return vector[0] * SIGMA_X + vector[1] * SIGMA_Y + vector[2] * SIGMA_Z


def observable_from_direction(v: UnitVector3 | Sequence[float]) -> np.ndarray:
    """
    Dichotomic observable A = a . sigma. Eigenvalues are exactly +1 and -1.
    """
    if isinstance(v, UnitVector3):
        vector = v.as_array()
    else:
        vector = np.asarray(v, dtype=float).reshape(-1)
        if vector.shape != (3,):
            raise InvalidInputError(f'Direction must have 3 components, got {vector.shape[0]}')
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > UNIT_NORM_ATOL:
            raise InvalidInputError(f'Direction {vector.tolist()} is not a unit vector (norm {norm!r})')
    return direction_matrix(vector)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    dim = _square_dim(a, 'left factor') * _square_dim(b, 'right factor')
    if dim > MAX_DIM:
        raise InvalidInputError(f'Kronecker product of dimension {dim} exceeds {MAX_DIM}')
    return np.kron(a, b)


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    result = np.ones((1, 1), dtype=complex)
    for factor in factors:
        result = kron(result, factor)
    return result


def embed_on_qubit(m: np.ndarray, slot: int, num_qubits: int = MAX_QUBITS) -> np.ndarray:
    """I x ... x M x ... x I with M on qubit `slot` (1-based, qubit 1 leftmost)."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise InvalidInputError(f'Single-qubit operator must be 2x2, got shape {m.shape}')
    if not 1 <= slot <= num_qubits:
        raise InvalidInputError(f'Qubit slot {slot} outside 1..{num_qubits}')
    return kron_all(m if qubit == slot else IDENTITY2 for qubit in range(1, num_qubits + 1))


def expectation(rho: DensityMatrix, m: np.ndarray) -> float:
    """tr(rho M) for Hermitian M."""
    m = np.asarray(m, dtype=complex)
    if _square_dim(m, 'observable') != rho.dim:
        raise InvalidInputError(f'Observable dimension {m.shape[0]} does not match state dimension {rho.dim}')
    if not is_hermitian(m):
        raise InvalidInputError('Observable is not Hermitian')
    value = np.einsum('ij,ji->', rho.matrix, m)
    if abs(value.imag) > IMAGINARY_RESIDUE_ATOL:
        raise NumericalInvariantError(f'Expectation has imaginary residue {value.imag!r}')
    return float(value.real)


def pure_to_density(psi: PureState) -> DensityMatrix:
    if not isinstance(psi, PureState):
        raise InvalidInputError('Expected a normalized PureState')
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))


def mix(terms: Sequence[tuple[float, PureState | DensityMatrix]]) -> DensityMatrix:
    """Convex combination sum p_k rho_k."""
    if not terms:
        raise InvalidInputError('A mixture needs at least one term')
    weights = np.array([float(p) for p, _ in terms])
    if np.any(weights <= 0.0):
        raise InvalidInputError(f'Mixture weights must be positive, got {weights.tolist()}')
    if abs(weights.sum() - 1.0) > MIX_WEIGHT_ATOL:
        raise InvalidInputError(f'Mixture weights sum to {weights.sum()!r}, expected 1')
    dims = set()
    matrix = None
    for p, state in terms:
        rho = pure_to_density(state) if isinstance(state, PureState) else state
        dims.add(rho.dim)
        matrix = p * rho.matrix if matrix is None else matrix + p * rho.matrix
    if len(dims) != 1:
        raise InvalidInputError(f'Mixture terms have different dimensions {sorted(dims)}')
    return DensityMatrix(matrix / weights.sum())


def _validate_permutation(perm: Sequence[int], num_qubits: int) -> tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(1, num_qubits + 1)):
        raise InvalidInputError(f'{perm} is not a permutation of 1..{num_qubits}')
    return perm


def invert_permutation(perm: Sequence[int]) -> tuple[int, ...]:
    perm = _validate_permutation(perm, len(perm))
    inverse = [0] * len(perm)
    for original, target in enumerate(perm, start=1):
        inverse[target - 1] = original
    return tuple(inverse)


def permute_qubits(psi: PureState, perm: Sequence[int]) -> PureState:
    """
    Move original qubit k to slot perm[k-1]. The amplitude of the relabelled
    basis state equals the original amplitude.
    """
    perm = _validate_permutation(perm, psi.num_qubits)
    moved = np.moveaxis(psi.tensor(), list(range(psi.num_qubits)), [p - 1 for p in perm])
    return PureState(moved.reshape(-1))


def permute_density(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    n = rho.num_qubits
    perm = _validate_permutation(perm, n)
    targets = [p - 1 for p in perm]
    tensor = rho.matrix.reshape((2,) * (2 * n))
    moved = np.moveaxis(tensor, list(range(2 * n)), targets + [n + t for t in targets])
    return DensityMatrix(moved.reshape(rho.dim, rho.dim))


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the qubits in `keep` (1-based), kept in ascending order."""
    n = rho.num_qubits
    keep = sorted(set(int(q) for q in keep))
    if not keep or any(not 1 <= q <= n for q in keep):
        raise InvalidInputError(f'Cannot keep qubits {keep} of a {n}-qubit state')
    tensor = rho.matrix.reshape((2,) * (2 * n))
    letters = 'abcdefgh'
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for q in range(n):
        if q + 1 not in keep:
            cols[q] = rows[q]
    output = ''.join(rows[q - 1] for q in keep) + ''.join(cols[q - 1] for q in keep)
    reduced = np.einsum(f"{''.join(rows)}{''.join(cols)}->{output}", tensor)
    dim = 2 ** len(keep)
    return DensityMatrix(reduced.reshape(dim, dim))


def purity(rho: DensityMatrix) -> float:
    return float(np.real(np.einsum('ij,ji->', rho.matrix, rho.matrix)))


def tensor_states(states: Sequence[PureState]) -> PureState:
    amplitudes = np.ones(1, dtype=complex)
    for state in states:
        amplitudes = np.kron(amplitudes, state.amplitudes)
    qubit_count(amplitudes.shape[0])
    return PureState(amplitudes)


def basis_state(label: str) -> PureState:
    """|i1 i2 ...> from a bit string such as '0101'."""
    if not label or set(label) - {'0', '1'} or len(label) > MAX_QUBITS:
        raise InvalidInputError(f'Basis label {label!r} must be 1..{MAX_QUBITS} bits')
    amplitudes = np.zeros(2 ** len(label), dtype=complex)
    amplitudes[int(label, 2)] = 1.0
    return PureState(amplitudes)
