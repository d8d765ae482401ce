from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from apps.bell.models import QUBITS
from apps.qubits.exceptions import InvalidInputError


FULLY_SEPARABLE_BOUND = 1.0
TRI_SEPARABLE_BOUND = 1.5
BI_SEPARABLE_2X2_BOUND = 1.5
BI_SEPARABLE_1X3_BOUND = math.sqrt(3.0)
UNRESTRICTED_BOUND = 2.0

KINDS = (
    'fully_separable',
    'tri_separable',
    'bi_separable_2x2',
    'bi_separable_1x3',
    'unrestricted',
)


@dataclass(frozen=True)
class SeparabilityClass:
    """
    A class of four-qubit states and the bound each |<D_4^(i)>| obeys on it.

    `blocks` is the partition of qubits 1..4 into unentangled groups; the
    unrestricted class is the single block (1, 2, 3, 4).
    """
    kind: str
    blocks: tuple[tuple[int, ...], ...]
    thresholds: tuple[float, float, float, float] = field(init=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f'Unknown separability kind {self.kind!r}')
        blocks = tuple(sorted(tuple(sorted(block)) for block in self.blocks))
        if sorted(q for block in blocks for q in block) != list(QUBITS):
            raise InvalidInputError(f'Blocks {blocks} do not partition qubits 1..4')
        object.__setattr__(self, 'blocks', blocks)
        object.__setattr__(self, 'thresholds', self._thresholds())

    def _thresholds(self) -> tuple[float, float, float, float]:
        if self.kind == 'fully_separable':
            return (FULLY_SEPARABLE_BOUND,) * 4
        if self.kind == 'tri_separable':
            pair = self.entangled_block
            return tuple(
                FULLY_SEPARABLE_BOUND if q in pair else TRI_SEPARABLE_BOUND for q in QUBITS
            )
        if self.kind == 'bi_separable_2x2':
            return (BI_SEPARABLE_2X2_BOUND,) * 4
        if self.kind == 'bi_separable_1x3':
            # |0> x GHZ_3 reaches 2 at the singleton's own operator
            singleton = self.singleton
            return tuple(
                UNRESTRICTED_BOUND if q == singleton else BI_SEPARABLE_1X3_BOUND for q in QUBITS
            )
        return (UNRESTRICTED_BOUND,) * 4

    @property
    def entangled_block(self) -> tuple[int, ...]:
        return max(self.blocks, key=len)

    @property
    def singleton(self) -> int | None:
        if self.kind != 'bi_separable_1x3':
            return None
        return next(block[0] for block in self.blocks if len(block) == 1)

    @property
    def id(self) -> str:
        if self.kind in ('fully_separable', 'unrestricted'):
            return self.kind
        if self.kind == 'tri_separable':
            return 'tri_separable_' + ''.join(map(str, self.entangled_block))
        if self.kind == 'bi_separable_1x3':
            rest = next(block for block in self.blocks if len(block) == 3)
            return f'bi_separable_{self.singleton}_' + ''.join(map(str, rest))
        return 'bi_separable_' + '_'.join(''.join(map(str, block)) for block in self.blocks)

    @property
    def label(self) -> str:
        """Partition label such as '12-3-4'."""
        return '-'.join(''.join(map(str, block)) for block in self.blocks)

    def admits(self, violations, tolerance: float) -> bool:
        """True unless some value exceeds its threshold by more than `tolerance`."""
        return all(
            abs(value) <= bound + tolerance
            for value, bound in zip(violations, self.thresholds)
        )


def all_classes() -> tuple[SeparabilityClass, ...]:
    """The fourteen named classes followed by `unrestricted`."""
    classes = [SeparabilityClass('fully_separable', tuple((q,) for q in QUBITS))]
    for pair in combinations(QUBITS, 2):
        rest = tuple((q,) for q in QUBITS if q not in pair)
        classes.append(SeparabilityClass('tri_separable', (pair, *rest)))
    for partner in (2, 3, 4):
        first = (1, partner)
        second = tuple(q for q in QUBITS if q not in first)
        classes.append(SeparabilityClass('bi_separable_2x2', (first, second)))
    for singleton in QUBITS:
        rest = tuple(q for q in QUBITS if q != singleton)
        classes.append(SeparabilityClass('bi_separable_1x3', ((singleton,), rest)))
    classes.append(SeparabilityClass('unrestricted', (tuple(QUBITS),)))
    return tuple(classes)


def class_by_id(class_id: str) -> SeparabilityClass:
    for candidate in all_classes():
        if candidate.id == class_id:
            return candidate
    raise InvalidInputError(f'Unknown separability class {class_id!r}')


def class_by_label(label: str) -> SeparabilityClass:
    """'12-3-4' -> tri_separable_12; 'fully_separable' and 'genuine' are accepted too."""
    if label == 'genuine':
        label = '1234'
    if label == 'fully_separable':
        label = '1-2-3-4'
    for candidate in all_classes():
        if candidate.label == '-'.join(sorted(''.join(sorted(block)) for block in label.split('-'))):
            return candidate
    raise InvalidInputError(f'Unknown class label {label!r}')


@dataclass(frozen=True)
class ClassificationReport:
    """
    Classes a state is excluded from by its optimized Bell values. Being
    consistent with a class never certifies membership.
    """
    violations: tuple[float, float, float, float]
    omega_max: float
    excluded: tuple[SeparabilityClass, ...]
    consistent: tuple[SeparabilityClass, ...]
    tolerance: float
    optimizer: dict = field(default_factory=dict)

    @property
    def genuinely_multipartite(self) -> bool:
        """Every named class is excluded."""
        return all(c.kind == 'unrestricted' for c in self.consistent)
