"""
Brute-force maximum of |<D_4^(i)>| over settings restricted to a plane.

Every direction vector takes one of n = 360 / resolution angles in the
chosen plane. The qubit-i pair (a_i, b_i) enters as
1/2 a_i . (X + y) + 1/2 b_i . (X - y), where X collects the three-qubit
Mermin part and y is the Bloch vector of qubit i; its grid maximum over a_i
and b_i is found in closed form. The remaining six vectors are enumerated,
with a_p, a_q and a_r restricted to half the circle: negating a block
(a_k, b_k) flips X, which the substitution (a_i, b_i) -> (-b_i, -a_i)
undoes.
"""
from __future__ import annotations

import logging

import numpy as np
from django.conf import settings as django_settings

from apps.bell.models import SettingSet, validate_operator_index
from apps.bell.utils import MERMIN_TERMS, other_qubits
from apps.correlations.utils import bell_expectations, pauli_tensor
from apps.qubits.exceptions import InvalidInputError
from apps.qubits.models import DensityMatrix


logger = logging.getLogger(__name__)

PLANES = {
    'xy': (0, 1),
    'xz': (0, 2),
    'yz': (1, 2),
}

DEFAULT_RESOLUTION_DEG = 15.0


def grid_angles(resolution_deg: float) -> np.ndarray:
    if not resolution_deg > 0.0:
        raise InvalidInputError(f'Resolution {resolution_deg!r} deg must be positive')
    steps = 360.0 / float(resolution_deg)
    n = int(round(steps))
    if abs(steps - n) > 1e-9 or n % 2:
        raise InvalidInputError(
            f'Resolution {resolution_deg!r} deg must divide 360 into an even number of steps'
        )
    return np.arange(n) * (2 * np.pi / n)


def grid_directions(angles: np.ndarray, plane: str) -> np.ndarray:
    """Unit vectors cos(t) e1 + sin(t) e2 in `plane`, shape (n, 3)."""
    first, second = _plane_axes(plane)
    directions = np.zeros((angles.shape[0], 3))
    directions[:, first] = np.cos(angles)
    directions[:, second] = np.sin(angles)
    return directions


def _plane_axes(plane: str) -> tuple[int, int]:
    try:
        return PLANES[plane]
    except KeyError:
        raise InvalidInputError(f'Unknown plane {plane!r}; expected one of {", ".join(PLANES)}')


def _plane_max(w: np.ndarray, plane: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    """
    max over the grid of direction . w for vectors w (3, ...) and the index
    of the maximizing direction.
    """
    first, second = _plane_axes(plane)
    u, v = w[first], w[second]
    radius = np.hypot(u, v)
    position = np.arctan2(v, u) * (n / (2 * np.pi))
    nearest = np.round(position)
    offset = (position - nearest) * (2 * np.pi / n)
    return radius * np.cos(offset), nearest.astype(int) % n


def grid_size(resolution_deg: float) -> int:
    """Number of grid cells: n angles for each of the six enumerated vectors."""
    return grid_angles(resolution_deg).shape[0] ** 6


def grid_search(rho: DensityMatrix, i: int, resolution_deg: float = DEFAULT_RESOLUTION_DEG,
                plane: str = 'xy', budget: int | None = None) -> tuple[float, SettingSet]:
    """
    Exhaustive maximum of |<D_4^(i)>| over planar grid settings, together
    with settings that attain it.
    """
    i = validate_operator_index(i)
    budget = django_settings.BELL4_GRID_BUDGET if budget is None else int(budget)
    angles = grid_angles(resolution_deg)
    n = angles.shape[0]
    cells = n ** 6
    if cells > budget:
        raise InvalidInputError(f'Grid of {cells} cells exceeds the budget of {budget}')

    full = grid_directions(angles, plane)
    half = full[: n // 2]
    components = pauli_tensor(rho)
    p, q, r = other_qubits(i)
    # Pauli block with axes ordered (i, p, q, r)
    k = np.transpose(components[1:, 1:, 1:, 1:], (i - 1, p - 1, q - 1, r - 1))
    y = components[tuple(slice(1, 4) if qubit == i else 0 for qubit in (1, 2, 3, 4))]
    signs = {kinds: sign for sign, kinds in MERMIN_TERMS}

    best = (-np.inf, None)
    for ap in range(n // 2):
        for bp in range(n):
            k_by_p = {
                'a': np.einsum('xpqr,p->xqr', k, full[ap]),
                'b': np.einsum('xpqr,p->xqr', k, full[bp]),
            }

            def block(kind_p, kind_q, kind_r):
                # (3, q-grid, r-grid) contribution of one Mermin term
                q_grid = half if kind_q == 'a' else full
                r_grid = half if kind_r == 'a' else full
                return signs[(kind_p, kind_q, kind_r)] * np.einsum(
                    'xqr,aq,br->xab', k_by_p[kind_p], q_grid, r_grid,
                )

            # Terms grouped by the kinds on q and r: X[x, aq, bq, ar, br]
            x = 0.5 * (
                block('a', 'a', 'a')[:, :, None, :, None]
                + block('a', 'b', 'b')[:, None, :, None, :]
                + block('b', 'a', 'b')[:, :, None, None, :]
                + block('b', 'b', 'a')[:, None, :, :, None]
            )
            plus, _ = _plane_max(x + y[:, None, None, None, None], plane, n)
            minus, _ = _plane_max(x - y[:, None, None, None, None], plane, n)
            values = 0.5 * (plus + minus)
            flat = int(np.argmax(values))
            if values.flat[flat] > best[0]:
                best = (float(values.flat[flat]), (ap, bp, *np.unravel_index(flat, values.shape)))
        logger.debug('grid row a%d=%d of %d: best %.12f', p, ap, n // 2, best[0])

    ap, bp, aq, bq, ar, br = best[1]
    vectors = np.zeros((2, 4, 3))
    vectors[0, p - 1], vectors[1, p - 1] = full[ap], full[bp]
    vectors[0, q - 1], vectors[1, q - 1] = half[aq], full[bq]
    vectors[0, r - 1], vectors[1, r - 1] = half[ar], full[br]
    x_best = 0.5 * sum(
        sign * np.einsum(
            'xpqr,p,q,r->x', k,
            vectors[0 if kinds[0] == 'a' else 1, p - 1],
            vectors[0 if kinds[1] == 'a' else 1, q - 1],
            vectors[0 if kinds[2] == 'a' else 1, r - 1],
        )
        for sign, kinds in MERMIN_TERMS
    )
    _, a_index = _plane_max(x_best + y, plane, n)
    _, b_index = _plane_max(x_best - y, plane, n)
    vectors[0, i - 1] = full[int(a_index)]
    vectors[1, i - 1] = full[int(b_index)]

    settings = SettingSet.from_array(vectors)
    value = abs(float(bell_expectations(components, settings.as_array(), i)[0]))
    logger.info('grid oracle D_4^(%d) on %d cells (%s plane): %.12f', i, cells, plane, value)
    return value, settings


def grid_oracle(rho: DensityMatrix, i: int, resolution_deg: float = DEFAULT_RESOLUTION_DEG,
                plane: str = 'xy', budget: int | None = None) -> float:
    """Lower bound on sup |<D_4^(i)>| from the planar grid."""
    value, _ = grid_search(rho, i, resolution_deg, plane, budget)
    return value
