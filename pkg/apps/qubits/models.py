from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidInputError


MAX_QUBITS = 4
MAX_DIM = 2 ** MAX_QUBITS

# Rejection thresholds; accepted inputs are renormalized exactly
UNIT_NORM_ATOL = 1e-9
STATE_NORM_ATOL = 1e-9

HERMITIAN_ATOL = 1e-10
TRACE_ATOL = 1e-10
EIGENVALUE_FLOOR = -1e-9


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def qubit_count(dim: int) -> int:
    """Number of qubits for a Hilbert-space dimension 2, 4, 8 or 16."""
    if dim not in (2, 4, 8, 16):
        raise InvalidInputError(f'Dimension {dim} is not 2, 4, 8 or 16')
    return int(dim).bit_length() - 1


@dataclass(frozen=True)
class UnitVector3:
    """
    Measurement direction a_j or b_j on the Bloch sphere.
    """
    x: float
    y: float
    z: float

    def __post_init__(self):
        values = np.array([self.x, self.y, self.z], dtype=float)
        if not np.all(np.isfinite(values)):
            raise InvalidInputError(f'Direction {values.tolist()} has non-finite components')
        norm = float(np.linalg.norm(values))
        if abs(norm - 1.0) > UNIT_NORM_ATOL:
            raise InvalidInputError(f'Direction {values.tolist()} is not a unit vector (norm {norm!r})')
        values /= norm
        object.__setattr__(self, 'x', float(values[0]))
        object.__setattr__(self, 'y', float(values[1]))
        object.__setattr__(self, 'z', float(values[2]))

    @classmethod
    def from_array(cls, values, normalize: bool = False) -> UnitVector3:
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.shape != (3,):
            raise InvalidInputError(f'Direction must have 3 components, got {values.shape[0]}')
        if normalize:
            norm = np.linalg.norm(values)
            if norm == 0.0:
                raise InvalidInputError('Cannot normalize the zero vector')
            values = values / norm
        return cls(*values.tolist())

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> UnitVector3:
        """Polar angle theta from z, azimuth phi from x."""
        return cls(
            float(np.sin(theta) * np.cos(phi)),
            float(np.sin(theta) * np.sin(phi)),
            float(np.cos(theta)),
        )

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def __neg__(self) -> UnitVector3:
        return UnitVector3(-self.x, -self.y, -self.z)


X_AXIS = UnitVector3(1.0, 0.0, 0.0)
Y_AXIS = UnitVector3(0.0, 1.0, 0.0)
Z_AXIS = UnitVector3(0.0, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class PureState:
    """
    Pure state of 1..4 qubits. Basis index of |i1 i2 ... in> is the binary
    number i1 i2 ... in, qubit 1 most significant.
    """
    amplitudes: np.ndarray
    num_qubits: int = field(init=False)

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        num_qubits = qubit_count(amplitudes.shape[0])
        if not np.all(np.isfinite(amplitudes)):
            raise InvalidInputError('Amplitudes contain NaN or Inf')
        norm = float(np.linalg.norm(amplitudes))
        if abs(norm - 1.0) > STATE_NORM_ATOL:
            raise InvalidInputError(f'State is not normalized: sum |amplitude|^2 = {norm ** 2!r}')
        object.__setattr__(self, 'amplitudes', _frozen(amplitudes / norm))
        object.__setattr__(self, 'num_qubits', num_qubits)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis of length 2 per qubit."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def inner(self, other: PureState) -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def allclose(self, other: PureState, atol: float = 1e-10, up_to_phase: bool = False) -> bool:
        if self.dim != other.dim:
            return False
        if up_to_phase:
            return abs(abs(self.inner(other)) - 1.0) <= atol
        return bool(np.allclose(self.amplitudes, other.amplitudes, atol=atol, rtol=0.0))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Hermitian, positive semidefinite, unit-trace matrix on 1..4 qubits.
    """
    matrix: np.ndarray
    num_qubits: int = field(init=False)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidInputError(f'Density matrix must be square, got shape {matrix.shape}')
        num_qubits = qubit_count(matrix.shape[0])
        if not np.all(np.isfinite(matrix)):
            raise InvalidInputError('Density matrix contains NaN or Inf')
        if not np.allclose(matrix, matrix.conj().T, atol=HERMITIAN_ATOL, rtol=0.0):
            raise InvalidInputError('Density matrix is not Hermitian')
        trace = np.trace(matrix)
        if abs(trace - 1.0) > TRACE_ATOL:
            raise InvalidInputError(f'Density matrix trace is {trace.real!r}, expected 1')
        matrix = 0.5 * (matrix + matrix.conj().T)
        smallest = float(np.linalg.eigvalsh(matrix)[0])
        if smallest < EIGENVALUE_FLOOR:
            raise InvalidInputError(f'Density matrix has negative eigenvalue {smallest!r}')
        object.__setattr__(self, 'matrix', _frozen(matrix))
        object.__setattr__(self, 'num_qubits', num_qubits)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, num_qubits: int = MAX_QUBITS) -> DensityMatrix:
        dim = 2 ** num_qubits
        return cls(np.eye(dim, dtype=complex) / dim)

    def allclose(self, other: DensityMatrix, atol: float = 1e-10) -> bool:
        if self.dim != other.dim:
            return False
        return bool(np.allclose(self.matrix, other.matrix, atol=atol, rtol=0.0))
