from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from apps.qubits.exceptions import InvalidInputError, NumericalInvariantError
from apps.qubits.models import MAX_QUBITS, DensityMatrix
from apps.qubits.utils import (
    direction_matrix,
    embed_on_qubit,
    expectation,
    is_hermitian,
    kron_all,
)

from .models import QUBITS, BellOperator, SettingSet, validate_operator_index


SPECTRAL_RADIUS_BOUND = 2.0
SPECTRAL_RADIUS_ATOL = 1e-9

# B_3 = 1/2 (-A A A + A B B + B A B + B B A) on an ascending triple
MERMIN_TERMS = (
    (-1.0, ('a', 'a', 'a')),
    (1.0, ('a', 'b', 'b')),
    (1.0, ('b', 'a', 'b')),
    (1.0, ('b', 'b', 'a')),
)


def other_qubits(i: int) -> tuple[int, int, int]:
    """The three qubits that B_3 acts on for D_4^(i), ascending."""
    validate_operator_index(i)
    return tuple(q for q in QUBITS if q != i)


def _validate_triple(triple: Sequence[int]) -> tuple[int, int, int]:
    triple = tuple(int(q) for q in triple)
    if len(triple) != 3 or len(set(triple)) != 3:
        raise InvalidInputError(f'Triple {triple} must hold 3 distinct qubits')
    if any(not 1 <= q <= MAX_QUBITS for q in triple):
        raise InvalidInputError(f'Triple {triple} has qubits outside 1..{MAX_QUBITS}')
    if list(triple) != sorted(triple):
        raise InvalidInputError(f'Triple {triple} must be in ascending order')
    return triple


def _observable(vectors: np.ndarray, kind: str, qubit: int) -> np.ndarray:
    return direction_matrix(vectors[0 if kind == 'a' else 1, qubit - 1])


def _mermin_from_array(vectors: np.ndarray, triple: tuple[int, int, int]) -> np.ndarray:
    matrix = np.zeros((8, 8), dtype=complex)
    for sign, kinds in MERMIN_TERMS:
        matrix += sign * kron_all(
            _observable(vectors, kind, qubit) for kind, qubit in zip(kinds, triple)
        )
    return 0.5 * matrix


def d4_matrix(vectors: np.ndarray, i: int) -> np.ndarray:
    """
    Dense D_4^(i) for a raw (2, 4, 3) direction array. Vectors are used as
    given (no unit-norm check), which keeps the operator multilinear in each.
    """
    vectors = np.asarray(vectors, dtype=float)
    i = validate_operator_index(i)
    a_i = direction_matrix(vectors[0, i - 1])
    b_i = direction_matrix(vectors[1, i - 1])
    c_i = 0.5 * (a_i + b_i)
    d_i = 0.5 * (a_i - b_i)

    triple = other_qubits(i)
    matrix = np.zeros((16, 16), dtype=complex)
    for sign, kinds in MERMIN_TERMS:
        factors = dict(zip(triple, kinds))
        matrix += 0.5 * sign * kron_all(
            c_i if qubit == i else _observable(vectors, factors[qubit], qubit)
            for qubit in QUBITS
        )
    matrix += embed_on_qubit(d_i, i)
    return matrix


def mermin_b3(settings: SettingSet, triple: Sequence[int]) -> np.ndarray:
    """Three-qubit MABK operator on qubits `triple` (8x8)."""
    return _mermin_from_array(settings.as_array(), _validate_triple(triple))


def build_d4(settings: SettingSet, i: int) -> BellOperator:
    """
    D_4^(i) = B_3 (x) (A_i + B_i)/2 + I (x) (A_i - B_i)/2, with every factor
    placed on its own qubit slot.
    """
    i = validate_operator_index(i)
    matrix = d4_matrix(settings.as_array(), i)
    if not is_hermitian(matrix):
        raise NumericalInvariantError(f'D_4^({i}) is not Hermitian')
    operator = BellOperator(which=i, matrix=matrix, settings=settings)
    radius = operator.spectral_radius
    if radius > SPECTRAL_RADIUS_BOUND + SPECTRAL_RADIUS_ATOL:
        raise NumericalInvariantError(f'D_4^({i}) has spectral radius {radius!r} above 2')
    return operator


def bell_value(rho: DensityMatrix, settings: SettingSet, i: int) -> float:
    """<D_4^(i)> by the full 16x16 trace."""
    if rho.num_qubits != MAX_QUBITS:
        raise InvalidInputError(f'Bell operators act on 4 qubits, got a {rho.num_qubits}-qubit state')
    return expectation(rho, build_d4(settings, i).matrix)


def bell_values(rho: DensityMatrix, settings: SettingSet) -> tuple[float, float, float, float]:
    return tuple(bell_value(rho, settings, i) for i in QUBITS)


def omega(rho: DensityMatrix, settings: SettingSet) -> float:
    """Sum of the four squared Bell values."""
    return float(sum(value ** 2 for value in bell_values(rho, settings)))


