"""
Two-layer shallow water system over topography Z(x).

State U = (h1, q1, h2, q2), upper layer first; r = rho1/rho2 < 1.
Equilibrium variables E = (q1, E1, q2, E2) with
    E1 = q1^2/(2 h1^2) + g(h1 + h2 + Z)
    E2 = q2^2/(2 h2^2) + g(r h1 + h2 + Z)
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from src.errors import ConfigurationError, RecoveryError
from src.systems.base import ModelSystem, require_positive


logger = logging.getLogger(__name__)

NEWTON_TOLERANCE = 1e-13
MAX_ITERATIONS = 200
MAX_HALVINGS = 60


def layer_energies(h1, q1, h2, q2, Z, g: float, r: float):
    E1 = q1 ** 2 / (2.0 * h1 ** 2) + g * (h1 + h2 + Z)
    E2 = q2 ** 2 / (2.0 * h2 ** 2) + g * (r * h1 + h2 + Z)
    return E1, E2


def solve_layer_depths(E1, q1, E2, q2, Z, h1_ref, h2_ref, g: float = 10.0, r: float = 0.98):
    """
    Damped Newton solve of the two energy equations for (h1, h2).

    Steps are halved while a depth would become nonpositive. Entries that
    do not converge return the reference depths and are flagged.

    Returns:
        (h1, h2, failed)
    """
    arrays = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (E1, q1, E2, q2, Z, h1_ref, h2_ref)))
    E1, q1, E2, q2, Z, h1_ref, h2_ref = (a.copy() for a in arrays)
    h1, h2 = h1_ref.copy(), h2_ref.copy()
    converged = np.zeros(E1.shape, dtype=bool)
    scale = 1.0 + np.abs(E1) + np.abs(E2)

    for _ in range(MAX_ITERATIONS):
        f1, f2 = layer_energies(h1, q1, h2, q2, Z, g, r)
        res1, res2 = f1 - E1, f2 - E2
        converged |= (np.abs(res1) + np.abs(res2)) <= NEWTON_TOLERANCE * scale
        if np.all(converged):
            break

        a11 = g - q1 ** 2 / h1 ** 3
        a12 = np.full_like(h1, g)
        a21 = np.full_like(h1, r * g)
        a22 = g - q2 ** 2 / h2 ** 3
        det = a11 * a22 - a12 * a21
        with np.errstate(divide='ignore', invalid='ignore'):
            d1 = (a22 * res1 - a12 * res2) / det
            d2 = (a11 * res2 - a21 * res1) / det
        stuck = ~np.isfinite(d1) | ~np.isfinite(d2)
        d1 = np.where(stuck | converged, 0.0, d1)
        d2 = np.where(stuck | converged, 0.0, d2)

        step = np.ones_like(h1)
        for _ in range(MAX_HALVINGS):
            bad = (h1 - step * d1 <= 0.0) | (h2 - step * d2 <= 0.0)
            if not np.any(bad):
                break
            step = np.where(bad, 0.5 * step, step)
        h1 = h1 - step * d1
        h2 = h2 - step * d2

    f1, f2 = layer_energies(h1, q1, h2, q2, Z, g, r)
    converged |= (np.abs(f1 - E1) + np.abs(f2 - E2)) <= NEWTON_TOLERANCE * scale
    failed = ~converged | ~(h1 > 0) | ~(h2 > 0)
    h1 = np.where(failed, h1_ref, h1)
    h2 = np.where(failed, h2_ref, h2)
    return h1, h2, failed


def recover_state_two_layer(E1, q1, E2, q2, Z, reference, g: float = 10.0, r: float = 0.98):
    """
    Layer depths from the equilibrium variables, starting from reference = (h1, h2).

    Raises:
        RecoveryError: If Newton's method does not converge
    """
    h1, h2, failed = solve_layer_depths(E1, q1, E2, q2, Z, reference[0], reference[1], g, r)
    if np.any(failed):
        raise RecoveryError("Two-layer depth iteration did not converge",
                            cells=np.flatnonzero(failed).tolist())
    return h1, h2


class TwoLayerShallowWater(ModelSystem):
    name = 'two-layer'
    component_names = ('h1', 'q1', 'h2', 'q2')
    equilibrium_names = ('q1', 'E1', 'q2', 'E2')
    geometry_name = 'Z'

    def __init__(self, g: float = 10.0, r: float = 0.98):
        if not 0.0 < r < 1.0:
            raise ConfigurationError(f"Density ratio must lie in (0, 1), got {r}")
        self.g = float(g)
        self.r = float(r)

    def flux(self, U, geo):
        h1, q1, h2, q2 = U
        g = self.g
        return np.stack([q1, q1 ** 2 / h1 + 0.5 * g * h1 ** 2, q2, q2 ** 2 / h2 + 0.5 * g * h2 ** 2])

    def quasilinear_matrix(self, U, geo):
        h1, q1, h2, q2 = U
        u1, u2 = q1 / h1, q2 / h2
        g, r = self.g, self.r
        zero, one = np.zeros_like(h1), np.ones_like(h1)
        rows = [
            [zero, one, zero, zero],
            [g * h1 - u1 ** 2, 2 * u1, g * h1, zero],
            [zero, zero, zero, one],
            [r * g * h2, zero, g * h2 - u2 ** 2, 2 * u2],
        ]
        return np.stack([np.stack(row, -1) for row in rows], -2)

    def wave_speeds(self, U, geo):
        """Real-part extremes of the spectrum widened by the largest imaginary part."""
        A = self.quasilinear_matrix(U, geo)
        finite = np.all(np.isfinite(A), axis=(-2, -1))
        eigenvalues = np.linalg.eigvals(np.where(finite[..., None, None], A, 0.0))
        spread = np.abs(eigenvalues.imag).max(axis=-1)
        lo = np.where(finite, eigenvalues.real.min(axis=-1) - spread, np.nan)
        hi = np.where(finite, eigenvalues.real.max(axis=-1) + spread, np.nan)
        return lo, hi

    def source_integrand(self, U, U_x, geo, geo_x):
        h1, h2 = U[0], U[2]
        zero = np.zeros_like(h1)
        return np.stack([
            zero,
            -self.g * h1 * (U_x[2] + geo_x),
            zero,
            -self.g * h2 * (self.r * U_x[0] + geo_x),
        ])

    def validate(self, U, geo):
        require_positive(U[0], 'upper layer depth')
        require_positive(U[2], 'lower layer depth')

    def primitives(self, U, geo) -> Dict[str, np.ndarray]:
        h1, q1, h2, q2 = U
        return {'h1': h1, 'u1': q1 / h1, 'h2': h2, 'u2': q2 / h2, 'eta': h1 + h2 + geo}

    def equilibrium(self, U, geo, integral: Optional[np.ndarray] = None):
        h1, q1, h2, q2 = U
        E1, E2 = layer_energies(h1, q1, h2, q2, geo, self.g, self.r)
        return np.stack([q1, E1, q2, E2])

    def c_matrix(self, U, geo):
        h1, q1, h2, q2 = U
        u1, u2 = q1 / h1, q2 / h2
        g = np.full_like(h1, self.g)
        zero = np.zeros_like(h1)
        rows = [
            [u1, h1, zero, zero],
            [g, u1, g, zero],
            [zero, zero, u2, h2],
            [self.r * g, zero, g, u2],
        ]
        return np.stack([np.stack(row, -1) for row in rows], -2)

    def branch_reference(self, U, geo):
        return np.stack([U[0], U[2]])

    def recover(self, E, geo, integral, reference):
        q1, E1, q2, E2 = E
        h1, h2, failed = solve_layer_depths(E1, q1, E2, q2, geo, reference[0], reference[1], self.g, self.r)
        return np.stack([h1, np.broadcast_to(q1, h1.shape), h2, np.broadcast_to(q2, h2.shape)]), failed

    def interface_jump_term(self, U_hat_minus, U_hat_plus, geo_minus, geo_plus):
        h1_mean = 0.5 * (U_hat_minus[0] + U_hat_plus[0])
        h2_mean = 0.5 * (U_hat_minus[2] + U_hat_plus[2])
        dZ = geo_plus - geo_minus
        zero = np.zeros_like(h1_mean)
        return np.stack([
            zero,
            -self.g * h1_mean * ((U_hat_plus[2] - U_hat_minus[2]) + dZ),
            zero,
            -self.g * h2_mean * (self.r * (U_hat_plus[0] - U_hat_minus[0]) + dZ),
        ])
