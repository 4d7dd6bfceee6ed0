"""
Compressible Euler equations with a time-independent gravitational potential.

State U = (rho, m, En) with En = p/(gamma-1) + m^2/(2 rho) + rho*phi.
Equilibrium variables E = (m, K, L) with
    K = m^2/rho + p + I,  I the running integral of rho*phi_x
    L = (En + p)/rho
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from src.characteristics.lcd import CharBasis
from src.errors import RecoveryError, StateError
from src.systems.base import ModelSystem, require_positive, zero_integral


logger = logging.getLogger(__name__)


def solve_euler_density(K, L, m, n, phi, I, rho_ref, gamma: float = 1.4):
    """
    Density from the quadratic
        (gamma-1)(L-phi) rho^2 - gamma (K-I) rho + (gamma+1) m^2/2 - (gamma-1) n^2/2 = 0.

    The positive root closest to rho_ref is taken; a negative discriminant
    falls back to the vertex. Entries with L <= phi, no positive root or a
    negative discriminant are flagged (the vertex is still returned when it
    is positive).

    Returns:
        (rho, failed, inadmissible) where inadmissible flags L <= phi
    """
    K, L, m, n, phi, I, rho_ref = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (K, L, m, n, phi, I, rho_ref)))
    a = (gamma - 1.0) * (L - phi)
    b = gamma * (K - I)
    c = 0.5 * (gamma + 1.0) * m ** 2 - 0.5 * (gamma - 1.0) * n ** 2
    inadmissible = ~(a > 0.0)
    safe_a = np.where(inadmissible, 1.0, a)

    disc = b ** 2 - 4.0 * safe_a * c
    complex_roots = disc < 0.0
    sq = np.sqrt(np.maximum(disc, 0.0))
    qq = 0.5 * (b + np.where(b >= 0.0, sq, -sq))
    with np.errstate(divide='ignore', invalid='ignore'):
        r1 = qq / safe_a
        r2 = np.where(qq != 0.0, c / qq, np.nan)
    r1_ok = np.isfinite(r1) & (r1 > 0.0)
    r2_ok = np.isfinite(r2) & (r2 > 0.0)
    pick_r2 = r2_ok & (~r1_ok | (np.abs(r2 - rho_ref) < np.abs(r1 - rho_ref)))
    rho = np.where(pick_r2, r2, r1)
    no_root = ~(r1_ok | r2_ok)

    vertex = b / (2.0 * safe_a)
    rho = np.where(complex_roots, vertex, rho)
    failed = inadmissible | complex_roots | (no_root & ~complex_roots) | ~(rho > 0.0)
    rho = np.where(inadmissible | ~(rho > 0.0), rho_ref, rho)
    return rho, failed, inadmissible


def energy_from_equilibrium(rho, m, n, L, phi, gamma: float = 1.4):
    """Pressure and total energy En from rho and the equilibrium variables."""
    p = (gamma - 1.0) / gamma * (rho * (L - phi) - (m ** 2 + n ** 2) / (2.0 * rho))
    return p, rho * L - p


def recover_state_euler(K, L, m, phi, I, rho_ref, n=0.0, gamma: float = 1.4):
    """
    (rho, En) from the equilibrium variables.

    Raises:
        StateError: If L <= phi
        RecoveryError: If no positive density exists
    """
    rho, failed, inadmissible = solve_euler_density(K, L, m, n, phi, I, rho_ref, gamma)
    if np.any(inadmissible):
        raise StateError(f"L - phi must be positive, got min {np.min(np.asarray(L) - np.asarray(phi))}")
    if np.any(failed):
        raise RecoveryError("No positive density root", cells=np.flatnonzero(failed).tolist())
    _, energy = energy_from_equilibrium(rho, m, n, L, phi, gamma)
    return rho, energy


class EulerGravity1D(ModelSystem):
    """1-D Euler equations with gravitational potential phi(x)."""

    name = 'euler-1d'
    component_names = ('rho', 'm', 'En')
    equilibrium_names = ('m', 'K', 'L')
    geometry_name = 'phi'
    integral_is_source = True

    def __init__(self, gamma: float = 1.4):
        self.gamma = float(gamma)

    @property
    def has_integral(self) -> bool:
        return True

    def pressure(self, U, phi):
        rho, m, En = U
        return (self.gamma - 1.0) * (En - rho * phi - 0.5 * m ** 2 / rho)

    def flux(self, U, geo):
        rho, m, En = U
        p = self.pressure(U, geo)
        u = m / rho
        return np.stack([m, m * u + p, u * (En + p)])

    def wave_speeds(self, U, geo):
        u = U[1] / U[0]
        c = np.sqrt(self.gamma * self.pressure(U, geo) / U[0])
        return u - c, u + c

    def quasilinear_matrix(self, U, geo):
        rho, m, En = U
        gm = self.gamma - 1.0
        u = m / rho
        p = self.pressure(U, geo)
        L = (En + p) / rho
        dp_drho = gm * (0.5 * u ** 2 - geo)
        dp_dm = -gm * u
        zero, one = np.zeros_like(u), np.ones_like(u)
        rows = [
            [zero, one, zero],
            [dp_drho - u ** 2, 2 * u + dp_dm, np.full_like(u, gm)],
            [u * (dp_drho - L), L + u * dp_dm, self.gamma * u],
        ]
        return np.stack([np.stack(row, -1) for row in rows], -2)

    def source_integrand(self, U, U_x, geo, geo_x):
        zero = np.zeros_like(U[0])
        return np.stack([zero, -U[0] * geo_x, zero])

    def equilibrium_integrand(self, U, geo, geo_slope):
        return U[0] * geo_slope

    def source_from_integral(self, integral):
        zero = np.zeros_like(integral)
        return np.stack([zero, -integral, zero])

    def validate(self, U, geo):
        require_positive(U[0], 'density')
        require_positive(self.pressure(U, geo), 'pressure')

    def primitives(self, U, geo) -> Dict[str, np.ndarray]:
        return {'rho': U[0], 'u': U[1] / U[0], 'p': self.pressure(U, geo)}

    def equilibrium(self, U, geo, integral: Optional[np.ndarray] = None):
        rho, m, En = U
        p = self.pressure(U, geo)
        I = zero_integral(integral, rho)
        return np.stack([m, m ** 2 / rho + p + I, (En + p) / rho])

    def c_matrix(self, U, geo):
        rho, m, En = U
        gamma = self.gamma
        u = m / rho
        c2 = gamma * self.pressure(U, geo) / rho
        zero, one = np.zeros_like(u), np.ones_like(u)
        rows = [
            [zero, one, zero],
            [(gamma - 2.0) * u ** 2 + c2, (3.0 - gamma) * u, (gamma - 1.0) * m],
            [((gamma - 1.0) * u ** 2 + c2) / rho, (1.0 - gamma) * u / rho, gamma * u],
        ]
        return np.stack([np.stack(row, -1) for row in rows], -2)

    def characteristic_basis(self, U, geo) -> Tuple[CharBasis, np.ndarray]:
        rho, m, En = U
        gamma = self.gamma
        u = m / rho
        c2 = gamma * self.pressure(U, geo) / rho
        c = np.sqrt(c2)
        one = np.ones_like(u)
        Q_rows = [
            [(1.0 - gamma) * m / c2, -rho / c, rho / c],
            [(1.0 - gamma) * m ** 2 / (c2 * rho), rho - m / c, rho + m / c],
            [one, one, one],
        ]
        Qi_rows = [
            [u / rho, -one / rho, one],
            [(1.0 - gamma) * u ** 2 / (2 * c * rho) - (u + c) / (2 * rho),
             (gamma - 1.0) * u / (2 * c * rho) + 1.0 / (2 * rho),
             (1.0 - gamma) * u / (2 * c)],
            [(gamma - 1.0) * u ** 2 / (2 * c * rho) - (u - c) / (2 * rho),
             (1.0 - gamma) * u / (2 * c * rho) + 1.0 / (2 * rho),
             (gamma - 1.0) * u / (2 * c)],
        ]
        Q = np.stack([np.stack(row, -1) for row in Q_rows], -2)
        Q_inv = np.stack([np.stack(row, -1) for row in Qi_rows], -2)
        lost = ~(c2 > 0)
        if np.any(lost):
            eye = np.eye(3)
            Q = np.where(lost[..., None, None], eye, Q)
            Q_inv = np.where(lost[..., None, None], eye, Q_inv)
        return CharBasis(Q, Q_inv, np.stack([u, u - c, u + c], -1)), lost

    def branch_reference(self, U, geo):
        return U[0]

    def recover(self, E, geo, integral, reference):
        m, K, L = E
        I = zero_integral(integral, m)
        rho, failed, _ = solve_euler_density(K, L, m, 0.0, geo, I, reference, self.gamma)
        _, energy = energy_from_equilibrium(rho, m, 0.0, L, geo, self.gamma)
        return np.stack([rho, np.broadcast_to(m, rho.shape), energy]), failed

    def interface_jump_term(self, U_hat_minus, U_hat_plus, geo_minus, geo_plus):
        rho_mean = 0.5 * (U_hat_minus[0] + U_hat_plus[0])
        zero = np.zeros_like(rho_mean)
        return np.stack([zero, -rho_mean * (geo_plus - geo_minus), zero])
