"""
Gas flow in a nozzle of variable cross-section sigma(x).

State U = (sigma*rho, q) with q = sigma*rho*u, pressure p = kappa*rho^gamma.
Equilibrium variables E = (q, u^2/2 + kappa*gamma/(gamma-1)*rho^(gamma-1)).
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from src.characteristics.lcd import CharBasis
from src.errors import RecoveryError
from src.systems.base import ModelSystem, require_positive


logger = logging.getLogger(__name__)

NEWTON_TOLERANCE = 1e-14
MAX_ITERATIONS = 100
MAX_BRACKET_STEPS = 200


def _energy_residual(rho, q, sigma, E, gamma, kappa):
    enthalpy = kappa * gamma / (gamma - 1.0) * rho ** (gamma - 1.0)
    return q ** 2 / (2.0 * sigma ** 2 * rho ** 2) + enthalpy - E


def _energy_slope(rho, q, sigma, gamma, kappa):
    return -q ** 2 / (sigma ** 2 * rho ** 3) + kappa * gamma * rho ** (gamma - 2.0)


def sonic_density(q, sigma, gamma: float = 1.4, kappa: float = 1.0):
    """Density at which the energy is minimal for fixed discharge (u = c)."""
    return (np.asarray(q, dtype=float) ** 2 / (sigma ** 2 * kappa * gamma)) ** (1.0 / (gamma + 1.0))


def solve_nozzle_density(E, q, sigma, rho_ref, gamma: float = 1.4, kappa: float = 1.0
                         ) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorized safeguarded Newton solve for rho on the branch of rho_ref.

    The branch is supersonic when rho_ref lies below the sonic density and
    subsonic otherwise. Entries without a root on the chosen branch return
    the sonic density and are flagged.

    Returns:
        (rho, failed)
    """
    E, q, sigma, rho_ref = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (E, q, sigma, rho_ref)))
    shape = E.shape
    E, q, sigma, rho_ref = (a.ravel() for a in (E, q, sigma, rho_ref))
    rho = np.empty_like(E)
    failed = np.zeros(E.shape, dtype=bool)

    still = np.abs(q) == 0.0
    base = (gamma - 1.0) * E / (kappa * gamma)
    rho[still] = np.maximum(base[still], 0.0) ** (1.0 / (gamma - 1.0))
    failed[still] = base[still] <= 0.0

    moving = ~still
    if np.any(moving):
        Em, qm, sm, rm = E[moving], q[moving], sigma[moving], rho_ref[moving]
        rho_s = sonic_density(qm, sm, gamma, kappa)
        g_sonic = _energy_residual(rho_s, qm, sm, Em, gamma, kappa)
        no_root = g_sonic >= 0.0
        supersonic = rm < rho_s

        # bracket [lo, hi] with g(lo) and g(hi) of opposite signs
        lo = np.where(supersonic, 0.5 * rho_s, rho_s)
        hi = np.where(supersonic, rho_s, 2.0 * rho_s)
        for _ in range(MAX_BRACKET_STEPS):
            g_lo = _energy_residual(lo, qm, sm, Em, gamma, kappa)
            g_hi = _energy_residual(hi, qm, sm, Em, gamma, kappa)
            grow_lo = supersonic & (g_lo <= 0.0) & ~no_root
            grow_hi = ~supersonic & (g_hi <= 0.0) & ~no_root
            if not (np.any(grow_lo) or np.any(grow_hi)):
                break
            lo = np.where(grow_lo, 0.5 * lo, lo)
            hi = np.where(grow_hi, 2.0 * hi, hi)

        x = np.clip(rm, lo, hi)
        x = np.where((x <= lo) | (x >= hi), 0.5 * (lo + hi), x)
        converged = no_root.copy()
        for _ in range(MAX_ITERATIONS):
            g = _energy_residual(x, qm, sm, Em, gamma, kappa)
            # keep the root bracketed: g is decreasing on the supersonic branch
            positive_side = np.where(supersonic, g > 0.0, g < 0.0)
            lo = np.where(positive_side, x, lo)
            hi = np.where(positive_side, hi, x)
            slope = _energy_slope(x, qm, sm, gamma, kappa)
            with np.errstate(divide='ignore', invalid='ignore'):
                step = g / slope
            candidate = x - step
            outside = ~np.isfinite(candidate) | (candidate <= lo) | (candidate >= hi)
            candidate = np.where(outside, 0.5 * (lo + hi), candidate)
            done = np.abs(candidate - x) <= NEWTON_TOLERANCE * np.abs(x)
            x = np.where(converged, x, candidate)
            converged |= done
            if np.all(converged):
                break

        x = np.where(no_root, rho_s, x)
        rho[moving] = x
        failed[moving] = no_root | ~converged

    return rho.reshape(shape), failed.reshape(shape)


def recover_state_nozzle(E, q, sigma, reference, gamma: float = 1.4, kappa: float = 1.0) -> np.ndarray:
    """
    sigma*rho from (q, E) on the Mach regime of the reference density.

    Raises:
        RecoveryError: If no root exists on the reference branch
    """
    rho, failed = solve_nozzle_density(E, q, sigma, reference, gamma, kappa)
    if np.any(failed):
        raise RecoveryError("No nozzle density on the reference branch",
                            cells=np.flatnonzero(failed).tolist())
    return np.asarray(sigma) * rho


class NozzleFlow(ModelSystem):
    """Nozzle flow with cross-section sigma(x) and polytropic pressure."""

    name = 'nozzle'
    component_names = ('sigma_rho', 'q')
    equilibrium_names = ('q', 'E')
    geometry_name = 'sigma'

    def __init__(self, gamma: float = 1.4, kappa: float = 1.0):
        self.gamma = float(gamma)
        self.kappa = float(kappa)

    def _unpack(self, U, sigma):
        sr, q = U[0], U[1]
        rho = sr / sigma
        return sr, q, rho, q / sr

    def pressure(self, U, sigma):
        return self.kappa * (U[0] / sigma) ** self.gamma

    def sound_speed(self, U, sigma):
        rho = U[0] / sigma
        return np.sqrt(self.kappa * self.gamma * rho ** (self.gamma - 1.0))

    def flux(self, U, geo):
        sr, q, rho, u = self._unpack(U, geo)
        return np.stack([q, q * u + geo * self.kappa * rho ** self.gamma])

    def wave_speeds(self, U, geo):
        u = U[1] / U[0]
        c = self.sound_speed(U, geo)
        return u - c, u + c

    def quasilinear_matrix(self, U, geo):
        u = U[1] / U[0]
        c2 = self.sound_speed(U, geo) ** 2
        zero, one = np.zeros_like(u), np.ones_like(u)
        return np.stack([np.stack([zero, one], -1), np.stack([c2 - u ** 2, 2 * u], -1)], -2)

    def source_integrand(self, U, U_x, geo, geo_x):
        return np.stack([np.zeros_like(U[0]), self.pressure(U, geo) * geo_x])

    def validate(self, U, geo):
        require_positive(U[0], 'sigma*rho')
        require_positive(geo, 'cross-section')

    def primitives(self, U, geo) -> Dict[str, np.ndarray]:
        rho = U[0] / geo
        u = U[1] / U[0]
        return {'rho': rho, 'u': u, 'p': self.pressure(U, geo)}

    def equilibrium(self, U, geo, integral: Optional[np.ndarray] = None):
        rho = U[0] / geo
        u = U[1] / U[0]
        energy = 0.5 * u ** 2 + self.kappa * self.gamma / (self.gamma - 1.0) * rho ** (self.gamma - 1.0)
        return np.stack([U[1], energy])

    def c_matrix(self, U, geo):
        sr = U[0]
        u = U[1] / sr
        c2 = self.sound_speed(U, geo) ** 2
        return np.stack([np.stack([u, sr], -1), np.stack([c2 / sr, u], -1)], -2)

    def characteristic_basis(self, U, geo) -> Tuple[CharBasis, np.ndarray]:
        sr = U[0]
        u = U[1] / sr
        c = self.sound_speed(U, geo)
        Q = np.stack([np.stack([sr, sr], -1), np.stack([-c, c], -1)], -2)
        Q_inv = np.stack([np.stack([c, -sr], -1), np.stack([c, sr], -1)], -2) / (2.0 * sr * c)[..., None, None]
        lost = ~np.isfinite(c) | ~(c > 0)
        return CharBasis(Q, Q_inv, np.stack([u - c, u + c], -1)), lost

    def branch_reference(self, U, geo):
        return U[0] / geo

    def recover(self, E, geo, integral, reference):
        rho, failed = solve_nozzle_density(E[1], E[0], geo, reference, self.gamma, self.kappa)
        return np.stack([geo * rho, np.broadcast_to(E[0], rho.shape)]), failed

    def interface_jump_term(self, U_hat_minus, U_hat_plus, geo_minus, geo_plus):
        geo_mean = 0.5 * (geo_minus + geo_plus)
        p_mean = 0.5 * (self.pressure(U_hat_minus, geo_mean) + self.pressure(U_hat_plus, geo_mean))
        return np.stack([np.zeros_like(p_mean), p_mean * (geo_plus - geo_minus)])
