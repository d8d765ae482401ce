from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from django.conf import settings as django_settings

from apps.bell.models import QUBITS
from apps.optimize.models import OptimizeConfig, OptimizeResult
from apps.optimize.utils import seesaw_bell, seesaw_omega
from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import DensityMatrix

from .models import ClassificationReport, SeparabilityClass, all_classes


logger = logging.getLogger(__name__)


def threshold_table() -> list[tuple[SeparabilityClass, tuple[float, float, float, float]]]:
    return [(separability_class, separability_class.thresholds) for separability_class in all_classes()]


def classify_violations(violations, omega_max: float, tolerance: float,
                        optimizer: dict | None = None) -> ClassificationReport:
    """Compare optimized values against every class's thresholds."""
    violations = tuple(float(value) for value in violations)
    if len(violations) != len(QUBITS):
        raise InvalidInputError(f'Expected {len(QUBITS)} violation values, got {len(violations)}')
    if not tolerance >= 0.0:
        raise InvalidInputError(f'tolerance = {tolerance!r} must be non-negative')
    excluded, consistent = [], []
    for separability_class in all_classes():
        if separability_class.admits(violations, tolerance):
            consistent.append(separability_class)
        else:
            excluded.append(separability_class)
    return ClassificationReport(
        violations=violations,
        omega_max=float(omega_max),
        excluded=tuple(excluded),
        consistent=tuple(consistent),
        tolerance=float(tolerance),
        optimizer=dict(optimizer or {}),
    )


def optimize_all(rho: DensityMatrix, cfg: OptimizeConfig) -> tuple[list[OptimizeResult], OptimizeResult]:
    """seesaw_bell for i = 1..4 and seesaw_omega; with threads > 1 the five run side by side."""
    if cfg.threads == 1:
        return [seesaw_bell(rho, i, cfg) for i in QUBITS], seesaw_omega(rho, cfg)

    inner = replace(cfg, threads=1)
    with ThreadPoolExecutor(max_workers=min(cfg.threads, len(QUBITS) + 1)) as executor:
        bell_futures = [executor.submit(seesaw_bell, rho, i, inner) for i in QUBITS]
        omega_future = executor.submit(seesaw_omega, rho, inner)
        return [future.result() for future in bell_futures], omega_future.result()


def classify(rho: DensityMatrix, cfg: OptimizeConfig, tolerance: float | None = None) -> ClassificationReport:
    """
    Excluded classes of `rho`: those whose bound some optimized value breaks.
    A state breaking no bound is consistent with every class.
    """
    tolerance = django_settings.BELL4_CLASSIFY_TOLERANCE if tolerance is None else tolerance
    bell_results, omega_result = optimize_all(rho, cfg)
    report = classify_violations(
        [result.best_value for result in bell_results],
        omega_result.best_value,
        tolerance,
        optimizer=cfg.as_dict(),
    )
    logger.info(
        'classified: violations %s, excluded %s',
        [round(value, 9) for value in report.violations],
        [c.id for c in report.excluded],
    )
    return report
