from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from rest_framework import serializers

from apps.bell.serializers import SettingSetSerializer
from apps.qubits.exceptions import InvalidInputError
from apps.states.models import SWEEP_DEFAULTS, SWEEPABLE, FamilySpec, SpecPart
from apps.states.serializers import StateSpecSerializer

from .models import CSV_COLUMNS, RunManifest, manifest_path
from .serializers import RunManifestSerializer


logger = logging.getLogger(__name__)


def load_json(path) -> object:
    """Parsed JSON; syntax errors carry their line and column."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as exc:
        raise InvalidInputError(f'{path}: {exc.strerror or exc}')

    def reject_constant(name):
        raise InvalidInputError(f'{path}: non-finite number {name} is not allowed')

    try:
        return json.loads(text, parse_constant=reject_constant)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f'{path}: line {exc.lineno} column {exc.colno}: {exc.msg}')


def _flatten_errors(errors, prefix: str = '') -> list[str]:
    if isinstance(errors, dict):
        return [
            message
            for key, value in errors.items()
            for message in _flatten_errors(value, f'{prefix}{key}.' if key != 'non_field_errors' else prefix)
        ]
    if isinstance(errors, list):
        return [message for value in errors for message in _flatten_errors(value, prefix)]
    return [f'{prefix.rstrip(".") or "state"}: {errors}']


def validated(serializer_class: type[serializers.Serializer], data, source: str):
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise InvalidInputError(f'{source}: ' + '; '.join(_flatten_errors(serializer.errors)))
    return serializer.save()


def load_state_spec(path):
    return validated(StateSpecSerializer, load_json(path), str(path))


def load_settings(path):
    return validated(SettingSetSerializer, load_json(path), str(path))


def sweep_spec(family: str, param: str, value: float) -> FamilySpec:
    """
    Four-qubit state of a sweep point. Two- and three-qubit families are
    padded with |0> qubits: Schmidt pairs sit on qubits 1, 2 and the
    tripartite families on qubits 2, 3, 4.
    """
    if family not in SWEEPABLE:
        raise InvalidInputError(f'Family {family!r} cannot be swept; choose one of {", ".join(SWEEPABLE)}')
    if param not in SWEEPABLE[family]:
        raise InvalidInputError(f'Family {family!r} has no parameter {param!r}')
    params = dict(SWEEP_DEFAULTS[family])
    params[param] = float(value)
    spec = FamilySpec(family, params)
    if family == 'schmidt_pair':
        zeros = FamilySpec('basis', {'label': '00'})
        return FamilySpec('product', parts=(SpecPart(spec, (1, 2)), SpecPart(zeros, (3, 4))))
    if family in ('ghz3', 'w3'):
        zero = FamilySpec('basis', {'label': '0'})
        return FamilySpec('product', parts=(SpecPart(zero, (1,)), SpecPart(spec, (2, 3, 4))))
    return spec


def state_representation(spec) -> dict:
    return StateSpecSerializer(spec).data


def format_float(value) -> str:
    """17 significant digits, enough to round-trip a double."""
    if value is None:
        return ''
    return f'{float(value):.17g}'


def write_csv(path, rows) -> None:
    """Rows are dicts keyed by CSV_COLUMNS; floats are written with format_float."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({
                column: format_float(row.get(column)) if column in ('v1', 'v2', 'v3', 'v4', 'omega') else row.get(column, '')
                for column in CSV_COLUMNS
            })


def read_csv(path) -> list[dict]:
    with Path(path).open(encoding='utf-8', newline='') as handle:
        return list(csv.DictReader(handle))


def write_json(path, data) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, ensure_ascii=False) + '\n', encoding='utf-8')


def manifest_data(manifest: RunManifest) -> dict:
    return dict(RunManifestSerializer(manifest).data)


def write_manifest(manifest: RunManifest) -> list[str]:
    """Write `<output>.manifest.json` next to every output of the run."""
    data = manifest_data(manifest)
    for output in manifest.outputs:
        write_json(manifest_path(output), data)
        logger.debug('manifest written for %s', output)
    return list(manifest.manifest_paths)


def ordered_map(func, items, threads: int) -> list:
    """func over items with up to `threads` workers; results keep input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(func, items))
