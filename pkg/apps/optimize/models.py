from __future__ import annotations

from dataclasses import dataclass, field

from django.conf import settings as django_settings

from apps.bell.models import SettingSet, validate_operator_index
from apps.qubits.exceptions import InvalidInputError


@dataclass(frozen=True)
class Objective:
    """What a see-saw run maximizes: |<D_4^(i)>| for one i, or omega."""
    kind: str
    operator: int | None = None

    def __post_init__(self):
        if self.kind not in ('bell', 'omega'):
            raise InvalidInputError(f'Unknown objective {self.kind!r}')
        if self.kind == 'bell':
            validate_operator_index(self.operator)
        elif self.operator is not None:
            raise InvalidInputError('The omega objective takes no operator index')

    @classmethod
    def bell(cls, i: int) -> Objective:
        return cls('bell', int(i))

    @classmethod
    def omega(cls) -> Objective:
        return cls('omega')

    @property
    def label(self) -> str:
        return f'bell_{self.operator}' if self.kind == 'bell' else 'omega'


@dataclass(frozen=True)
class OptimizeConfig:
    restarts: int = 32
    max_sweeps: int = 200
    tol: float = 1e-9
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if int(self.restarts) != self.restarts or self.restarts < 1:
            raise InvalidInputError(f'restarts = {self.restarts!r} must be a positive integer')
        if int(self.max_sweeps) != self.max_sweeps or self.max_sweeps < 1:
            raise InvalidInputError(f'max_sweeps = {self.max_sweeps!r} must be a positive integer')
        if not self.tol > 0.0:
            raise InvalidInputError(f'tol = {self.tol!r} must be positive')
        if int(self.threads) != self.threads or self.threads < 1:
            raise InvalidInputError(f'threads = {self.threads!r} must be a positive integer')
        if int(self.seed) != self.seed or self.seed < 0:
            raise InvalidInputError(f'seed = {self.seed!r} must be a non-negative integer')

    @classmethod
    def from_settings(cls, **overrides) -> OptimizeConfig:
        """Defaults from BELL4_* settings, with explicit overrides (None means unset)."""
        values = {
            'restarts': django_settings.BELL4_RESTARTS,
            'max_sweeps': django_settings.BELL4_MAX_SWEEPS,
            'tol': django_settings.BELL4_TOL,
            'seed': django_settings.BELL4_SEED,
            'threads': django_settings.BELL4_THREADS,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def as_dict(self) -> dict:
        return {
            'restarts': self.restarts,
            'max_sweeps': self.max_sweeps,
            'tol': self.tol,
            'seed': self.seed,
            'threads': self.threads,
        }


@dataclass(frozen=True)
class OptimizeResult:
    """
    Best value over all restarts and the settings that achieve it.
    `sweeps_used` belongs to the best restart.
    """
    best_value: float
    best_settings: SettingSet
    sweeps_used: int
    restart_values: tuple[float, ...]
    objective: Objective
    restart_sweeps: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.restart_values:
            raise InvalidInputError('A result needs at least one restart value')
        if self.best_value != max(self.restart_values):
            raise InvalidInputError('best_value must be the maximum restart value')
