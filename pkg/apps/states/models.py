from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from apps.qubits.exceptions import InvalidInputError


ANGLE_ATOL = 1e-12

FAMILY_NAMES = (
    'gghz',
    'schmidt_pair',
    'ghz3',
    'w3',
    'product',
    'haar_pure',
    'mixture',
    'maximally_mixed',
    'basis',
)

# Parameters each family accepts; every one is required
FAMILY_PARAMS = {
    'gghz': ('alpha',),
    'schmidt_pair': ('alpha',),
    'ghz3': ('delta', 'alpha', 'beta', 'gamma', 'phi'),
    'w3': ('a', 'b', 'c'),
    'product': (),
    'haar_pure': ('seed',),
    'mixture': ('seed', 'terms'),
    'maximally_mixed': (),
    'basis': ('label',),
}

# Scalar parameters a sweep may vary
SWEEPABLE = {
    name: params for name, params in FAMILY_PARAMS.items()
    if name in ('gghz', 'schmidt_pair', 'ghz3', 'w3')
}

MAX_MIXTURE_TERMS = 4


def check_range(name: str, value: float, low: float, high: float,
                low_open: bool = False, high_open: bool = False) -> float:
    value = float(value)
    below = value <= low - ANGLE_ATOL if not low_open else value <= low
    above = value >= high + ANGLE_ATOL if not high_open else value >= high
    if not np.isfinite(value) or below or above:
        left = '(' if low_open else '['
        right = ')' if high_open else ']'
        raise InvalidInputError(f'{name} = {value!r} outside {left}{low}, {high}{right}')
    return value


@dataclass(frozen=True)
class SpecPart:
    """A sub-state placed on `slots` (for products) or weighted by `p` (for mixtures)."""
    spec: 'StateSpec'
    slots: tuple[int, ...] = ()
    p: float | None = None


@dataclass(frozen=True)
class FamilySpec:
    """
    Named state family with its real parameters and, for products, its parts.
    """
    name: str
    params: dict = field(default_factory=dict)
    parts: tuple[SpecPart, ...] = ()

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise InvalidInputError(f'Unknown family {self.name!r}; expected one of {", ".join(FAMILY_NAMES)}')
        expected = set(FAMILY_PARAMS[self.name])
        given = set(self.params)
        if expected != given:
            missing = sorted(expected - given)
            extra = sorted(given - expected)
            raise InvalidInputError(f'Family {self.name!r} parameters: missing {missing}, unexpected {extra}')
        if self.name == 'product' and not self.parts:
            raise InvalidInputError('Family "product" needs parts')
        if self.name != 'product' and self.parts:
            raise InvalidInputError(f'Family {self.name!r} takes no parts')

    def with_param(self, name: str, value: float) -> FamilySpec:
        params = dict(self.params)
        params[name] = value
        return FamilySpec(name=self.name, params=params, parts=self.parts)


@dataclass(frozen=True, eq=False)
class AmplitudeSpec:
    """Explicit pure state: 2, 4, 8 or 16 complex amplitudes."""
    amplitudes: np.ndarray


@dataclass(frozen=True)
class MixtureSpec:
    """Explicit convex combination of sub-states."""
    terms: tuple[SpecPart, ...]


StateSpec = Union[FamilySpec, AmplitudeSpec, MixtureSpec]


# Base point of a parameter sweep; the swept parameter overrides its entry
SWEEP_DEFAULTS = {
    'gghz': {'alpha': np.pi / 8},
    'schmidt_pair': {'alpha': np.pi / 4},
    'ghz3': {'delta': np.pi / 4, 'alpha': np.pi / 2, 'beta': np.pi / 2, 'gamma': np.pi / 2, 'phi': 0.0},
    'w3': {'a': 0.25, 'b': 0.25, 'c': 0.25},
}
