from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import brentq

from apps.bell.models import QUBITS, SLOTS, SettingSet, Slot, random_directions, validate_operator_index
from apps.bell.utils import bell_value, omega
from apps.correlations.utils import bell_expectations, pauli_tensor
from apps.qubits.exceptions import NumericalInvariantError
from apps.qubits.models import DensityMatrix

from .models import Objective, OptimizeConfig, OptimizeResult


logger = logging.getLogger(__name__)

BELL_BOUND = 2.0
# omega can exceed 4: GHZ_4 at a = (x,x,x,x), b = (x,y,y,y) gives 4 + 1 + 1 + 1
QUADRATIC_BOUND = 4.0
OMEGA_BOUND = 4 * BELL_BOUND ** 2
BOUND_ATOL = 1e-8
MONOTONE_ATOL = 1e-12
REPRODUCE_ATOL = 1e-10
FLAT_ATOL = 1e-12
EIGEN_GAP_ATOL = 1e-10

# Probe values of the updated vector: 0, e_x, e_y, e_z
PROBES = np.vstack([np.zeros(3), np.eye(3)])


def _affine_parts(components: np.ndarray, vectors: np.ndarray, i: int, slot: Slot) -> tuple[float, np.ndarray]:
    """
    <D_4^(i)> = c + g . v in the direction vector v at `slot`; returns (c, g).
    """
    probes = np.repeat(vectors[None], 4, axis=0)
    probes[:, slot.index[0], slot.index[1]] = PROBES
    values = bell_expectations(components, probes, i)
    return float(values[0]), values[1:] - values[0]


def direction_gradient(rho: DensityMatrix, settings: SettingSet, i: int, which_vector: Slot) -> np.ndarray:
    """
    Gradient g of <D_4^(i)> in one direction vector: the expectation equals
    g . v + c with c independent of v.
    """
    i = validate_operator_index(i)
    _, gradient = _affine_parts(pauli_tensor(rho), settings.as_array(), i, which_vector)
    return gradient


def _check_monotone(previous: float, current: float, objective: Objective, where: str) -> None:
    if current < previous - MONOTONE_ATOL * max(1.0, abs(previous)):
        raise NumericalInvariantError(
            f'{objective.label} decreased from {previous!r} to {current!r} at {where}'
        )


def _bell_restart(components: np.ndarray, i: int, vectors: np.ndarray,
                  cfg: OptimizeConfig, objective: Objective) -> tuple[float, np.ndarray, int]:
    vectors = vectors.copy()
    value = abs(float(bell_expectations(components, vectors, i)[0]))
    sweeps = 0
    for sweeps in range(1, cfg.max_sweeps + 1):
        start = value
        for slot in SLOTS:
            c, g = _affine_parts(components, vectors, i, slot)
            norm = float(np.linalg.norm(g))
            if norm <= FLAT_ATOL:
                continue
            sign = 1.0 if c >= 0.0 else -1.0
            vectors[slot.index] = sign * g / norm
            updated = abs(c) + norm
            _check_monotone(value, updated, objective, f'slot {slot.label}')
            value = updated
        _check_monotone(start, value, objective, f'sweep {sweeps}')
        if value - start < cfg.tol:
            break
    final = abs(float(bell_expectations(components, vectors, i)[0]))
    return final, vectors, sweeps


def maximize_quadratic_on_sphere(m: np.ndarray, h: np.ndarray, current: np.ndarray) -> np.ndarray:
    """
    Unit vector maximizing v^T M v + 2 h^T v for symmetric M. Solves the
    secular equation sum h_k^2 / (mu - lambda_k)^2 = 1 for mu > lambda_max,
    falling back to mu = lambda_max when h has no weight on the top
    eigenspace. A degenerate top eigenspace with h = 0 keeps `current`.
    """
    eigenvalues, eigenvectors = np.linalg.eigh(m)
    top = float(eigenvalues[-1])
    h_norm = float(np.linalg.norm(h))
    scale = max(1.0, abs(top), h_norm)
    is_top = eigenvalues >= top - EIGEN_GAP_ATOL * scale
    h_tilde = eigenvectors.T @ h

    if h_norm <= FLAT_ATOL * scale:
        if np.count_nonzero(is_top) > 1:
            return current
        w = eigenvectors[:, -1]
        return w if float(w @ current) >= 0.0 else -w

    def secular(mu):
        return float(np.sum(h_tilde ** 2 / (mu - eigenvalues) ** 2)) - 1.0

    # secular(top + 2|h|) <= -3/4; walk the lower end towards top until it turns positive
    upper = top + 2.0 * h_norm
    gap = 2.0 * h_norm
    while gap > FLAT_ATOL * scale:
        gap *= 0.5
        if secular(top + gap) > 0.0:
            mu = brentq(secular, top + gap, upper)
            v = eigenvectors @ (h_tilde / (mu - eigenvalues))
            return v / np.linalg.norm(v)
        upper = top + gap

    # Hard case: mu = top, the top eigenspace fills the remaining length
    rest = ~is_top
    v_rest = eigenvectors[:, rest] @ (h_tilde[rest] / (top - eigenvalues[rest]))
    excess = max(0.0, 1.0 - float(v_rest @ v_rest))
    top_basis = eigenvectors[:, is_top]
    projection = top_basis @ (top_basis.T @ current)
    length = float(np.linalg.norm(projection))
    direction = projection / length if length > FLAT_ATOL else eigenvectors[:, -1]
    v = v_rest + np.sqrt(excess) * direction
    return v / np.linalg.norm(v)


def _omega_slot(components: np.ndarray, vectors: np.ndarray, slot: Slot) -> tuple[np.ndarray, np.ndarray]:
    parts = [_affine_parts(components, vectors, i, slot) for i in QUBITS]
    return np.array([c for c, _ in parts]), np.array([g for _, g in parts])


def _omega_from_parts(c: np.ndarray, g: np.ndarray, v: np.ndarray) -> float:
    return float(np.sum((c + g @ v) ** 2))


def _omega_restart(components: np.ndarray, vectors: np.ndarray,
                   cfg: OptimizeConfig, objective: Objective) -> tuple[float, np.ndarray, int]:
    vectors = vectors.copy()
    value = _omega_value(components, vectors)
    sweeps = 0
    for sweeps in range(1, cfg.max_sweeps + 1):
        start = value
        for slot in SLOTS:
            c, g = _omega_slot(components, vectors, slot)
            current = vectors[slot.index].copy()
            value = _omega_from_parts(c, g, current)
            candidate = maximize_quadratic_on_sphere(g.T @ g, g.T @ c, current)
            updated = _omega_from_parts(c, g, candidate)
            if updated >= value:
                vectors[slot.index] = candidate
                value = updated
        _check_monotone(start, value, objective, f'sweep {sweeps}')
        if value - start < cfg.tol:
            break
    return _omega_value(components, vectors), vectors, sweeps


def _omega_value(components: np.ndarray, vectors: np.ndarray) -> float:
    return float(sum(bell_expectations(components, vectors, i)[0] ** 2 for i in QUBITS))


def restart_generators(cfg: OptimizeConfig) -> list[np.random.Generator]:
    """One independent PCG64 stream per restart, spawned from the seed."""
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def _run_restarts(run, cfg: OptimizeConfig, initial: SettingSet | None) -> list[tuple[float, np.ndarray, int]]:
    starts = [random_directions(rng, (2, len(QUBITS))) for rng in restart_generators(cfg)]
    if initial is not None:
        starts[0] = initial.as_array()
    if cfg.threads == 1:
        return [run(start) for start in starts]
    with ThreadPoolExecutor(max_workers=cfg.threads) as executor:
        return list(executor.map(run, starts))


def _collect(outcomes, objective: Objective) -> OptimizeResult:
    values = tuple(value for value, _, _ in outcomes)
    best = int(np.argmax(values))
    best_value, best_vectors, sweeps_used = outcomes[best]
    logger.info(
        '%s: best %.12f at restart %d after %d sweeps',
        objective.label, best_value, best, sweeps_used,
    )
    return OptimizeResult(
        best_value=best_value,
        best_settings=SettingSet.from_array(best_vectors),
        sweeps_used=sweeps_used,
        restart_values=values,
        objective=objective,
        restart_sweeps=tuple(sweeps for _, _, sweeps in outcomes),
    )


def _certify(result: OptimizeResult, reevaluated: float, bound: float) -> None:
    if abs(reevaluated - result.best_value) > REPRODUCE_ATOL:
        raise NumericalInvariantError(
            f'{result.objective.label}: best value {result.best_value!r} '
            f're-evaluates to {reevaluated!r}'
        )
    if result.best_value > bound + BOUND_ATOL:
        raise NumericalInvariantError(
            f'{result.objective.label}: value {result.best_value!r} exceeds the bound {bound}'
        )


def seesaw_bell(rho: DensityMatrix, i: int, cfg: OptimizeConfig,
                initial: SettingSet | None = None) -> OptimizeResult:
    """
    Maximize |<D_4^(i)>| over all settings by see-saw sweeps from random
    starts. `initial` replaces the starting point of restart 0.
    """
    i = validate_operator_index(i)
    objective = Objective.bell(i)
    components = pauli_tensor(rho)

    def run(start):
        outcome = _bell_restart(components, i, start, cfg, objective)
        logger.debug('%s restart done: %.12f in %d sweeps', objective.label, outcome[0], outcome[2])
        return outcome

    result = _collect(_run_restarts(run, cfg, initial), objective)
    _certify(result, abs(bell_value(rho, result.best_settings, i)), BELL_BOUND)
    return result


def seesaw_omega(rho: DensityMatrix, cfg: OptimizeConfig,
                 initial: SettingSet | None = None) -> OptimizeResult:
    """Maximize omega = sum_i <D_4^(i)>^2 over all settings."""
    objective = Objective.omega()
    components = pauli_tensor(rho)

    def run(start):
        outcome = _omega_restart(components, start, cfg, objective)
        logger.debug('omega restart done: %.12f in %d sweeps', outcome[0], outcome[2])
        return outcome

    result = _collect(_run_restarts(run, cfg, initial), objective)
    _certify(result, omega(rho, result.best_settings), OMEGA_BOUND)
    if result.best_value > QUADRATIC_BOUND + BOUND_ATOL:
        logger.warning('omega %.12f is above %.1f', result.best_value, QUADRATIC_BOUND)
    return result
