from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import MAX_QUBITS, UnitVector3
from apps.qubits.utils import invert_permutation


QUBITS = (1, 2, 3, 4)


class Slot(NamedTuple):
    """One of the eight direction vectors: kind 'a' or 'b' on a qubit 1..4."""
    kind: str
    qubit: int

    @property
    def index(self) -> tuple[int, int]:
        """Position in the (2, 4, 3) settings array."""
        return (0 if self.kind == 'a' else 1, self.qubit - 1)

    @property
    def label(self) -> str:
        return f'{self.kind}{self.qubit}'


SLOTS = tuple(Slot(kind, qubit) for kind in ('a', 'b') for qubit in QUBITS)


def validate_operator_index(i: int) -> int:
    if int(i) != i or not 1 <= i <= MAX_QUBITS:
        raise InvalidInputError(f'Operator index {i} outside 1..{MAX_QUBITS}')
    return int(i)


@dataclass(frozen=True)
class SettingSet:
    """
    The eight measurement directions: A_j = a_j . sigma and B_j = b_j . sigma
    for observers j = 1..4.
    """
    a: tuple[UnitVector3, UnitVector3, UnitVector3, UnitVector3]
    b: tuple[UnitVector3, UnitVector3, UnitVector3, UnitVector3]

    def __post_init__(self):
        for name in ('a', 'b'):
            vectors = tuple(getattr(self, name))
            if len(vectors) != MAX_QUBITS:
                raise InvalidInputError(f'Settings need {MAX_QUBITS} {name}-vectors, got {len(vectors)}')
            vectors = tuple(
                v if isinstance(v, UnitVector3) else UnitVector3.from_array(v)
                for v in vectors
            )
            object.__setattr__(self, name, vectors)

    @classmethod
    def from_array(cls, vectors) -> SettingSet:
        """From an array of shape (2, 4, 3): a-vectors first, then b-vectors."""
        vectors = np.asarray(vectors, dtype=float)
        if vectors.shape != (2, MAX_QUBITS, 3):
            raise InvalidInputError(f'Settings array must have shape (2, 4, 3), got {vectors.shape}')
        return cls(
            a=tuple(UnitVector3.from_array(v) for v in vectors[0]),
            b=tuple(UnitVector3.from_array(v) for v in vectors[1]),
        )

    @classmethod
    def uniform(cls, a: UnitVector3, b: UnitVector3 | None = None) -> SettingSet:
        """Same a-direction (and b-direction) on every qubit."""
        b = a if b is None else b
        return cls(a=(a,) * MAX_QUBITS, b=(b,) * MAX_QUBITS)

    @classmethod
    def random(cls, rng: np.random.Generator) -> SettingSet:
        return cls.from_array(random_directions(rng, (2, MAX_QUBITS)))

    def as_array(self) -> np.ndarray:
        return np.array([[v.as_array() for v in self.a], [v.as_array() for v in self.b]])

    def vector(self, slot: Slot) -> UnitVector3:
        return (self.a if slot.kind == 'a' else self.b)[slot.qubit - 1]

    def replace(self, slot: Slot, vector: UnitVector3) -> SettingSet:
        vectors = self.as_array()
        vectors[slot.index] = vector.as_array()
        return SettingSet.from_array(vectors)

    def swapped(self) -> SettingSet:
        """Exchange a_j and b_j on every qubit."""
        return SettingSet(a=self.b, b=self.a)

    def permuted(self, perm) -> SettingSet:
        """Directions of original qubit k move to slot perm[k-1]."""
        inverse = invert_permutation(perm)
        return SettingSet(
            a=tuple(self.a[q - 1] for q in inverse),
            b=tuple(self.b[q - 1] for q in inverse),
        )

    @property
    def s(self) -> np.ndarray:
        """s_j = (b_j + a_j) / 2, shape (4, 3)."""
        vectors = self.as_array()
        return 0.5 * (vectors[1] + vectors[0])

    @property
    def t(self) -> np.ndarray:
        """t_j = (b_j - a_j) / 2, shape (4, 3)."""
        vectors = self.as_array()
        return 0.5 * (vectors[1] - vectors[0])


def random_directions(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Isotropic unit vectors, normalized standard Gaussians."""
    vectors = rng.standard_normal((*shape, 3))
    return vectors / np.linalg.norm(vectors, axis=-1, keepdims=True)


@dataclass(frozen=True, eq=False)
class BellOperator:
    """
    D_4^(i) as a dense 16x16 Hermitian matrix together with its settings.
    """
    which: int
    matrix: np.ndarray
    settings: SettingSet

    def __post_init__(self):
        validate_operator_index(self.which)
        self.matrix.setflags(write=False)

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvalsh(self.matrix))))

    @property
    def s(self) -> np.ndarray:
        return self.settings.s[self.which - 1]

    @property
    def t(self) -> np.ndarray:
        return self.settings.t[self.which - 1]
