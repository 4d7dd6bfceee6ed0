"""
Saint-Venant system with bottom topography and Manning friction.

State U = (h, q); E = (q, u^2/2 + g(h + Z) + I) with I the running integral
of g*S_f, S_f = n^2 q|q| h^(-10/3).
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from src.characteristics.lcd import CharBasis
from src.errors import RecoveryError
from src.systems.base import ModelSystem, require_positive, zero_integral


logger = logging.getLogger(__name__)

DEPTH_FLOOR = 1e-12
POLISH_STEPS = 2


def solve_depth_cubic(E, q, Z, I, h_ref, g: float = 9.812) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solve g h^3 + (gZ + I - E) h^2 + q^2/2 = 0 for the depth.

    The larger positive root is taken when h_ref is subcritical, the smaller
    one when it is supercritical. Entries with no positive root return the
    real part of the complex pair clamped to DEPTH_FLOOR and are flagged.

    Returns:
        (h, failed)
    """
    E, q, Z, I, h_ref = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (E, q, Z, I, h_ref)))
    b = (g * Z + I - E) / g
    c0 = q ** 2 / (2.0 * g)

    # depressed cubic t^3 + p t + s with h = t - b/3
    p = -b ** 2 / 3.0
    s = 2.0 * b ** 3 / 27.0 + c0
    disc = (s / 2.0) ** 2 + (p / 3.0) ** 3
    three_real = (disc <= 0.0) & (p < 0.0)

    with np.errstate(invalid='ignore', divide='ignore'):
        radius = 2.0 * np.sqrt(np.where(three_real, -p / 3.0, 1.0))
        cos_arg = np.where(three_real, 3.0 * s / (p * radius), 0.0)
    theta = np.arccos(np.clip(cos_arg, -1.0, 1.0)) / 3.0
    largest = radius * np.cos(theta) - b / 3.0
    middle = radius * np.cos(theta - 2.0 * np.pi / 3.0) - b / 3.0

    h_crit = np.cbrt(q ** 2 / g)
    subcritical = h_ref >= h_crit
    h = np.where(subcritical, largest, middle)

    # one real (negative) root: real part of the complex pair
    root_disc = np.sqrt(np.maximum(disc, 0.0))
    real_root = np.cbrt(-s / 2.0 + root_disc) + np.cbrt(-s / 2.0 - root_disc) - b / 3.0
    pair_real = 0.5 * (-b - real_root)

    failed = ~three_real | ~(h > 0.0)
    h = np.where(failed, np.maximum(pair_real, DEPTH_FLOOR), h)

    for _ in range(POLISH_STEPS):
        value = h ** 3 + b * h ** 2 + c0
        slope = 3.0 * h ** 2 + 2.0 * b * h
        with np.errstate(invalid='ignore', divide='ignore'):
            update = np.where(failed | (slope == 0.0), 0.0, value / slope)
        h = np.where(np.isfinite(update), h - update, h)

    # still water: the cubic degenerates to a linear equation
    still = q == 0.0
    h_still = -b
    h = np.where(still, np.maximum(h_still, DEPTH_FLOOR), h)
    failed = np.where(still, h_still <= 0.0, failed)
    return h, failed


def recover_state_sw(E, q, Z, I, h_ref, g: float = 9.812) -> np.ndarray:
    """
    Depth from (q, E) at the one-sided topography Z.

    Raises:
        RecoveryError: If the cubic has no positive root
    """
    h, failed = solve_depth_cubic(E, q, Z, I, h_ref, g)
    if np.any(failed):
        raise RecoveryError("Depth cubic has no positive root", cells=np.flatnonzero(failed).tolist())
    return h


def recover_state_sw_hat(E, q, Z_minus, Z_plus, I, h_ref, g: float = 9.812) -> np.ndarray:
    """Depth from (q, E) at the interface-averaged topography."""
    return recover_state_sw(E, q, 0.5 * (np.asarray(Z_minus) + np.asarray(Z_plus)), I, h_ref, g)


class SaintVenant(ModelSystem):
    """Shallow water flow over topography Z(x) with optional Manning friction."""

    name = 'saint-venant'
    component_names = ('h', 'q')
    equilibrium_names = ('q', 'E')
    geometry_name = 'Z'

    def __init__(self, g: float = 9.812, manning: float = 0.0):
        self.g = float(g)
        self.manning = float(manning)

    @property
    def has_integral(self) -> bool:
        return self.manning > 0.0

    def friction_slope(self, U):
        h, q = U[0], U[1]
        return self.manning ** 2 * q * np.abs(q) * h ** (-10.0 / 3.0)

    def flux(self, U, geo):
        h, q = U[0], U[1]
        return np.stack([q, q ** 2 / h + 0.5 * self.g * h ** 2])

    def wave_speeds(self, U, geo):
        h = U[0]
        u = U[1] / h
        c = np.sqrt(self.g * h)
        return u - c, u + c

    def quasilinear_matrix(self, U, geo):
        h = U[0]
        u = U[1] / h
        zero, one = np.zeros_like(u), np.ones_like(u)
        return np.stack([np.stack([zero, one], -1), np.stack([self.g * h - u ** 2, 2 * u], -1)], -2)

    def source_integrand(self, U, U_x, geo, geo_x):
        h = U[0]
        momentum = -self.g * h * geo_x
        if self.manning > 0.0:
            momentum = momentum - self.g * h * self.friction_slope(U)
        return np.stack([np.zeros_like(h), momentum])

    def equilibrium_integrand(self, U, geo, geo_slope):
        if self.manning == 0.0:
            return np.zeros_like(U[0])
        return self.g * self.friction_slope(U)

    def validate(self, U, geo):
        require_positive(U[0], 'water depth')

    def primitives(self, U, geo) -> Dict[str, np.ndarray]:
        return {'h': U[0], 'u': U[1] / U[0], 'eta': U[0] + geo}

    def equilibrium(self, U, geo, integral: Optional[np.ndarray] = None):
        h, q = U[0], U[1]
        I = zero_integral(integral, h)
        return np.stack([q, 0.5 * (q / h) ** 2 + self.g * (h + geo) + I])

    def c_matrix(self, U, geo):
        h = U[0]
        u = U[1] / h
        g = np.full_like(h, self.g)
        return np.stack([np.stack([u, h], -1), np.stack([g, u], -1)], -2)

    def characteristic_basis(self, U, geo) -> Tuple[CharBasis, np.ndarray]:
        h = U[0]
        u = U[1] / h
        sh, sg = np.sqrt(h), np.full_like(h, np.sqrt(self.g))
        Q = np.stack([np.stack([sh, sh], -1), np.stack([-sg, sg], -1)], -2)
        Q_inv = np.stack([np.stack([sg, -sh], -1), np.stack([sg, sh], -1)], -2) / (2.0 * np.sqrt(self.g * h))[..., None, None]
        lost = ~(h > 0)
        c = np.sqrt(self.g * h)
        return CharBasis(Q, Q_inv, np.stack([u - c, u + c], -1)), lost

    def branch_reference(self, U, geo):
        return U[0]

    def recover(self, E, geo, integral, reference):
        I = zero_integral(integral, E[0])
        h, failed = solve_depth_cubic(E[1], E[0], geo, I, reference, self.g)
        return np.stack([h, np.broadcast_to(E[0], h.shape)]), failed

    def interface_jump_term(self, U_hat_minus, U_hat_plus, geo_minus, geo_plus):
        h_mean = 0.5 * (U_hat_minus[0] + U_hat_plus[0])
        return np.stack([np.zeros_like(h_mean), -self.g * h_mean * (geo_plus - geo_minus)])
