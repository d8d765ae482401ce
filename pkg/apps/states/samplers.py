"""
Random members of the separability classes.

A class is named by its partition label: blocks of qubits joined by '-',
e.g. '12-3-4', '14-23', '1-234'. 'fully_separable' is '1-2-3-4' and
'genuine' draws four-qubit entangled candidates.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from scipy.stats import unitary_group

from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import MAX_QUBITS, DensityMatrix, PureState
from apps.qubits.utils import mix, pure_to_density

from .utils import (
    apply_local_unitaries_to_pure,
    generalized_ghz,
    ghz_type3,
    haar_amplitudes,
    product,
    w_type3,
)


FULLY_SEPARABLE = 'fully_separable'
GENUINE = 'genuine'

# Lower end of the generalized GHZ angle used for genuine candidates
GENUINE_ALPHA_MIN = np.pi / 8


def parse_partition(label: str) -> tuple[tuple[int, ...], ...]:
    """'12-3-4' -> ((1, 2), (3,), (4,)). Blocks are sorted by their first qubit."""
    if label == FULLY_SEPARABLE:
        label = '1-2-3-4'
    if label == GENUINE:
        label = '1234'
    try:
        blocks = tuple(tuple(sorted(int(ch) for ch in block)) for block in label.split('-'))
    except ValueError:
        raise InvalidInputError(f'Invalid partition label {label!r}')
    qubits = sorted(q for block in blocks for q in block)
    if qubits != list(range(1, MAX_QUBITS + 1)) or any(not block for block in blocks):
        raise InvalidInputError(f'Partition {label!r} does not cover qubits 1..{MAX_QUBITS} exactly once')
    return tuple(sorted(blocks))


def local_unitaries(rng: np.random.Generator, num_qubits: int) -> list[np.ndarray]:
    return [unitary_group.rvs(2, random_state=rng) for _ in range(num_qubits)]


def random_ghz_type3(rng: np.random.Generator) -> PureState:
    delta = np.pi / 4 * (1.0 - rng.random())
    alpha, beta, gamma = np.pi / 2 * (1.0 - rng.random(3))
    phi = 2 * np.pi * rng.random()
    return ghz_type3(delta, alpha, beta, gamma, phi)


def random_w_type3(rng: np.random.Generator) -> PureState:
    weights = rng.dirichlet(np.ones(4))
    # Dirichlet components are positive almost surely
    a, b, c = np.maximum(weights[:3], 1e-15)
    return w_type3(a, b, c)


def random_genuine_candidate(rng: np.random.Generator) -> PureState:
    """Generalized GHZ under random local unitaries, or a Haar four-qubit state."""
    if rng.random() < 0.5:
        alpha = rng.uniform(GENUINE_ALPHA_MIN, np.pi / 4)
        return apply_local_unitaries_to_pure(generalized_ghz(alpha), local_unitaries(rng, MAX_QUBITS))
    return PureState(haar_amplitudes(rng, 16))


def random_block_state(rng: np.random.Generator, size: int) -> PureState:
    if size in (1, 2):
        return PureState(haar_amplitudes(rng, 2 ** size))
    if size == 3:
        factor = random_ghz_type3(rng) if rng.random() < 0.5 else random_w_type3(rng)
        return apply_local_unitaries_to_pure(factor, local_unitaries(rng, 3))
    return random_genuine_candidate(rng)


def sample_pure_member(blocks: Sequence[Sequence[int]], rng: np.random.Generator) -> PureState:
    """Random pure state that factorizes over `blocks`."""
    return product([(random_block_state(rng, len(block)), block) for block in blocks])


def sample_member(label: str, rng: np.random.Generator, terms: int = 1) -> DensityMatrix:
    """
    Random member of the class `label`; with `terms` > 1 a Dirichlet-weighted
    mixture of pure members of the same class.
    """
    blocks = parse_partition(label)
    if terms < 1:
        raise InvalidInputError(f'terms = {terms} must be positive')
    if terms == 1:
        return pure_to_density(sample_pure_member(blocks, rng))
    weights = rng.dirichlet(np.ones(terms))
    members = [sample_pure_member(blocks, rng) for _ in range(terms)]
    kept = [(float(p), state) for p, state in zip(weights, members) if p > 0.0]
    total = sum(p for p, _ in kept)
    return mix([(p / total, state) for p, state in kept])
