from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from apps.qubits.exceptions import InvalidInputError


# Named rank-3 vectors and the qubits they cover
TRIPLE_NAMES = {
    'T': (1, 2, 3),
    'S': (1, 2, 4),
    'V': (1, 3, 4),
    'U': (2, 3, 4),
}
SINGLE_NAMES = {
    'alpha': 1,
    'beta': 2,
    'gamma': 3,
    'epsilon': 4,
}


@dataclass(frozen=True, eq=False)
class CorrelationTensor:
    """
    All Pauli correlation components Q of a four-qubit state.

    `components[m1, m2, m3, m4]` is tr(rho sigma_m1 x sigma_m2 x sigma_m3 x
    sigma_m4) with m = 0 for the identity and 1, 2, 3 for sigma_x, sigma_y,
    sigma_z. Rank-k components are the entries with exactly k nonzero indices.
    """
    components: np.ndarray

    def __post_init__(self):
        components = np.array(self.components, dtype=float)
        if components.shape != (4, 4, 4, 4):
            raise InvalidInputError(f'Correlation tensor must have shape (4, 4, 4, 4), got {components.shape}')
        components.setflags(write=False)
        object.__setattr__(self, 'components', components)

    def block(self, qubits: tuple[int, ...]) -> np.ndarray:
        """
        Components acting with a Pauli on exactly `qubits` (ascending, 1-based)
        and the identity elsewhere; one axis of length 3 per qubit.
        """
        index = tuple(slice(1, 4) if q in qubits else 0 for q in (1, 2, 3, 4))
        return self.components[index]

    def component(self, qubits: tuple[int, ...], paulis: str) -> float:
        """Q_{i1..ik}^{(j1..jk)}, e.g. component((1, 2, 3, 4), '1122')."""
        if len(qubits) != len(paulis):
            raise InvalidInputError('Each qubit needs exactly one Pauli index')
        index = [0, 0, 0, 0]
        for qubit, pauli in zip(qubits, paulis):
            index[qubit - 1] = int(pauli)
        return float(self.components[tuple(index)])

    @property
    def singles(self) -> np.ndarray:
        """Bloch vectors alpha, beta, gamma, epsilon as rows, shape (4, 3)."""
        return np.stack([self.block((q,)) for q in (1, 2, 3, 4)])

    @property
    def alpha(self) -> np.ndarray:
        return self.block((1,))

    @property
    def beta(self) -> np.ndarray:
        return self.block((2,))

    @property
    def gamma(self) -> np.ndarray:
        return self.block((3,))

    @property
    def epsilon(self) -> np.ndarray:
        return self.block((4,))

    @property
    def pairs(self) -> dict[tuple[int, int], np.ndarray]:
        return {pair: self.block(pair) for pair in combinations((1, 2, 3, 4), 2)}

    def triple(self, name: str) -> np.ndarray:
        """27-vector T, S, V or U, first Pauli index slowest."""
        return self.block(TRIPLE_NAMES[name]).reshape(27)

    @property
    def T(self) -> np.ndarray:
        return self.triple('T')

    @property
    def S(self) -> np.ndarray:
        return self.triple('S')

    @property
    def V(self) -> np.ndarray:
        return self.triple('V')

    @property
    def U(self) -> np.ndarray:
        return self.triple('U')

    @property
    def Q(self) -> np.ndarray:
        """81-vector of rank-4 components, Q_1111 first and Q_3333 last."""
        return self.block((1, 2, 3, 4)).reshape(81)

    def named_norms(self) -> dict[str, float]:
        """The nine squared norms that enter the pure-state identity."""
        norms = {name: float(np.sum(self.block((q,)) ** 2)) for name, q in SINGLE_NAMES.items()}
        norms.update({name: float(np.sum(self.triple(name) ** 2)) for name in TRIPLE_NAMES})
        norms['Q'] = float(np.sum(self.Q ** 2))
        return norms
