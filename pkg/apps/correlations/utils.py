from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from scipy.stats import unitary_group

from apps.bell.models import QUBITS, SettingSet, validate_operator_index
from apps.bell.utils import MERMIN_TERMS
from apps.qubits.exceptions import InvalidInputError, NumericalInvariantError
from apps.qubits.models import MAX_QUBITS, DensityMatrix
from apps.qubits.utils import PAULI_BASIS, is_unitary, kron_all

from .models import SINGLE_NAMES, TRIPLE_NAMES, CorrelationTensor


IMAGINARY_COMPONENT_ATOL = 1e-10

IDENTITY_COMPONENT = np.array([1.0, 0.0, 0.0, 0.0])


def pauli_tensor(rho: DensityMatrix) -> np.ndarray:
    """Real (4, 4, 4, 4) array of tr(rho sigma_m1 x ... x sigma_m4)."""
    if rho.num_qubits != MAX_QUBITS:
        raise InvalidInputError(f'Correlation tensor needs a 4-qubit state, got {rho.num_qubits} qubits')
    rho_t = rho.matrix.reshape((2,) * 8)
    p = PAULI_BASIS
    values = np.einsum('abcdefgh,mea,nfb,ogc,phd->mnop', rho_t, p, p, p, p)
    residue = float(np.max(np.abs(values.imag)))
    if residue > IMAGINARY_COMPONENT_ATOL:
        raise NumericalInvariantError(f'Correlation components have imaginary residue {residue!r}')
    return values.real


def correlation_tensor(rho: DensityMatrix) -> CorrelationTensor:
    return CorrelationTensor(pauli_tensor(rho))


def reconstruct_density(t: CorrelationTensor) -> DensityMatrix:
    """rho = 1/16 sum Q_{m1..m4} sigma_m1 x ... x sigma_m4."""
    p = PAULI_BASIS
    matrix = np.einsum('mnop,mae,nbf,ocg,pdh->abcdefgh', t.components, p, p, p, p) / 16.0
    return DensityMatrix(matrix.reshape(16, 16))


def lemma_sum(t: CorrelationTensor) -> float:
    """|alpha|^2 + ... + |epsilon|^2 + |S|^2 + |T|^2 + |U|^2 + |V|^2 + |Q|^2 (pairs excluded)."""
    return float(sum(t.named_norms().values()))


def weighted_norm_sum(t: CorrelationTensor) -> float:
    """
    3 (singles) + (triples) + 2 |Q|^2 in squared norms; 18 for every pure
    state, while lemma_sum is 9 only on some families (11 for |00> x a Bell pair).
    """
    norms = t.named_norms()
    singles = sum(norms[name] for name in SINGLE_NAMES)
    triples = sum(norms[name] for name in TRIPLE_NAMES)
    return float(3.0 * singles + triples + 2.0 * norms['Q'])


def total_correlation_norm(t: CorrelationTensor) -> float:
    """Squared norm of all 255 non-identity components, 16 tr(rho^2) - 1."""
    return float(np.sum(t.components ** 2) - t.components[0, 0, 0, 0] ** 2)


def apply_local_unitaries(rho: DensityMatrix, u: Sequence[np.ndarray]) -> DensityMatrix:
    """(u1 x u2 x u3 x u4) rho (u1 x u2 x u3 x u4)^dagger."""
    if len(u) != MAX_QUBITS:
        raise InvalidInputError(f'Expected {MAX_QUBITS} single-qubit unitaries, got {len(u)}')
    for qubit, factor in enumerate(u, start=1):
        factor = np.asarray(factor, dtype=complex)
        if factor.shape != (2, 2) or not is_unitary(factor):
            raise InvalidInputError(f'Factor on qubit {qubit} is not a 2x2 unitary')
    total = kron_all(u)
    return DensityMatrix(total @ rho.matrix @ total.conj().T)


def random_local_unitaries(rng: np.random.Generator) -> list[np.ndarray]:
    """Four independent Haar-random single-qubit unitaries."""
    return [unitary_group.rvs(2, random_state=rng) for _ in QUBITS]


def _embedded(vectors: np.ndarray) -> np.ndarray:
    """Direction vectors (..., 3) as Pauli-basis coefficients (..., 4)."""
    shape = vectors.shape[:-1] + (4,)
    result = np.zeros(shape)
    result[..., 1:] = vectors
    return result


def bell_expectations(components: np.ndarray, vectors: np.ndarray, i: int) -> np.ndarray:
    """
    <D_4^(i)> by contracting the correlation tensor, for a batch of raw
    direction arrays of shape (n, 2, 4, 3). Returns shape (n,).
    """
    i = validate_operator_index(i)
    vectors = np.asarray(vectors, dtype=float)
    if vectors.ndim == 3:
        vectors = vectors[None]
    coefficients = _embedded(vectors)
    a_i = coefficients[:, 0, i - 1]
    b_i = coefficients[:, 1, i - 1]
    c_i = 0.5 * (a_i + b_i)
    d_i = 0.5 * (a_i - b_i)
    identity = np.broadcast_to(IDENTITY_COMPONENT, c_i.shape)

    triple = tuple(q for q in QUBITS if q != i)
    values = np.zeros(vectors.shape[0])
    for sign, kinds in MERMIN_TERMS:
        factors = dict(zip(triple, kinds))
        operands = [
            c_i if qubit == i else coefficients[:, 0 if factors[qubit] == 'a' else 1, qubit - 1]
            for qubit in QUBITS
        ]
        values += 0.5 * sign * np.einsum('mnop,zm,zn,zo,zp->z', components, *operands)
    operands = [d_i if qubit == i else identity for qubit in QUBITS]
    values += np.einsum('mnop,zm,zn,zo,zp->z', components, *operands)
    return values


def bell_value_from_tensor(t: CorrelationTensor, settings: SettingSet, i: int) -> float:
    """Contraction-path counterpart of apps.bell.utils.bell_value."""
    return float(bell_expectations(t.components, settings.as_array(), i)[0])
