from __future__ import annotations

from dataclasses import dataclass, field

from django.conf import settings as django_settings


CSV_COLUMNS = ('param', 'v1', 'v2', 'v3', 'v4', 'omega', 'class', 'seed')


@dataclass(frozen=True)
class RunManifest:
    """
    Everything needed to reproduce one output file: the command, its state
    description, the optimizer configuration and the tool version.
    """
    command: str
    config: dict
    outputs: tuple[str, ...]
    state: dict | None = None
    options: dict = field(default_factory=dict)
    version: str = field(default_factory=lambda: django_settings.BELL4_VERSION)
    rng_algorithm: str = field(default_factory=lambda: django_settings.BELL4_RNG_ALGORITHM)

    @property
    def manifest_paths(self) -> tuple[str, ...]:
        return tuple(manifest_path(output) for output in self.outputs)


def manifest_path(output: str) -> str:
    return f'{output}.manifest.json'
