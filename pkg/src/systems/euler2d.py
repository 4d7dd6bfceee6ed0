"""
2-D Euler equations with gravitation, written in the frame of one sweep.

An x-sweep sees U = (rho, m, n, En) with m the normal momentum. The y-sweep
reorders the state to (rho, n, m, En) and reuses the same formulas, so E^y
arrives as (n, m, K^y, L), a permutation of (m, n, K^y, L).
"""

from typing import Dict, Optional

import numpy as np

from src.systems.base import ModelSystem, require_positive, zero_integral
from src.systems.euler1d import energy_from_equilibrium, solve_euler_density


class EulerGravitySweep(ModelSystem):
    name = 'euler-2d'
    component_names = ('rho', 'm', 'n', 'En')
    equilibrium_names = ('m', 'n', 'K', 'L')
    geometry_name = 'phi'
    integral_is_source = True

    def __init__(self, gamma: float = 1.4):
        self.gamma = float(gamma)

    @property
    def has_integral(self) -> bool:
        return True

    def sweep_order(self, axis: str):
        return (0, 1, 2, 3) if axis == 'x' else (0, 2, 1, 3)

    def pressure(self, U, phi):
        rho, m, n, En = U
        return (self.gamma - 1.0) * (En - rho * phi - 0.5 * (m ** 2 + n ** 2) / rho)

    def flux(self, U, geo):
        rho, m, n, En = U
        p = self.pressure(U, geo)
        u = m / rho
        return np.stack([m, m * u + p, n * u, u * (En + p)])

    def wave_speeds(self, U, geo):
        u = U[1] / U[0]
        c = np.sqrt(self.gamma * self.pressure(U, geo) / U[0])
        return u - c, u + c

    def quasilinear_matrix(self, U, geo):
        rho, m, n, En = U
        gm = self.gamma - 1.0
        u, v = m / rho, n / rho
        L = (En + self.pressure(U, geo)) / rho
        dp_drho = gm * (0.5 * (u ** 2 + v ** 2) - geo)
        dp_dm, dp_dn = -gm * u, -gm * v
        zero, one = np.zeros_like(u), np.ones_like(u)
        rows = [
            [zero, one, zero, zero],
            [dp_drho - u ** 2, 2 * u + dp_dm, dp_dn, np.full_like(u, gm)],
            [-u * v, v, u, zero],
            [u * (dp_drho - L), L + u * dp_dm, u * dp_dn, self.gamma * u],
        ]
        return np.stack([np.stack(row, -1) for row in rows], -2)

    def source_integrand(self, U, U_x, geo, geo_x):
        zero = np.zeros_like(U[0])
        return np.stack([zero, -U[0] * geo_x, zero, zero])

    def equilibrium_integrand(self, U, geo, geo_slope):
        return U[0] * geo_slope

    def source_from_integral(self, integral):
        zero = np.zeros_like(integral)
        return np.stack([zero, -integral, zero, zero])

    def validate(self, U, geo):
        require_positive(U[0], 'density')
        require_positive(self.pressure(U, geo), 'pressure')

    def primitives(self, U, geo) -> Dict[str, np.ndarray]:
        rho = U[0]
        return {'rho': rho, 'u': U[1] / rho, 'v': U[2] / rho, 'p': self.pressure(U, geo)}

    def equilibrium(self, U, geo, integral: Optional[np.ndarray] = None):
        rho, m, n, En = U
        p = self.pressure(U, geo)
        I = zero_integral(integral, rho)
        return np.stack([m, n, m ** 2 / rho + p + I, (En + p) / rho])

    def local_jacobian(self, U, geo):
        """dW/dU for the local part W = (m, n, m^2/rho + p, L)."""
        rho, m, n, En = U
        gamma = self.gamma
        u, v = m / rho, n / rho
        zero, one = np.zeros_like(u), np.ones_like(u)
        rows = [
            [zero, one, zero, zero],
            [zero, zero, one, zero],
            [(1.0 - gamma) * geo + 0.5 * (gamma - 3.0) * u ** 2 + 0.5 * (gamma - 1.0) * v ** 2,
             (3.0 - gamma) * u, (1.0 - gamma) * v, np.full_like(u, gamma - 1.0)],
            [(gamma - 1.0) * (u ** 2 + v ** 2) / rho - gamma * En / rho ** 2,
             (1.0 - gamma) * u / rho, (1.0 - gamma) * v / rho, gamma / rho],
        ]
        return np.stack([np.stack(row, -1) for row in rows], -2)

    def steady_operator(self, U, geo):
        """M with M E_x = F_x - S at steady states."""
        rho, m, n, En = U
        gamma = self.gamma
        u, v = m / rho, n / rho
        L = (En + self.pressure(U, geo)) / rho
        denominator = (gamma - 1.0) * (2.0 * rho ** 2 * L + n ** 2) - (gamma + 1.0) * m ** 2
        numerator = 2.0 * m * n
        safe = np.where(denominator != 0.0, denominator, 1.0)
        psi = np.where(denominator != 0.0, numerator / safe, 0.0)
        zero, one = np.zeros_like(u), np.ones_like(u)
        rows = [
            [one, zero, zero, zero],
            [zero, zero, one, zero],
            [v + (gamma + 1.0) * u * psi, u + (1.0 - gamma) * v * psi, -gamma * psi, (gamma - 1.0) * rho * psi],
            [L, zero, zero, m],
        ]
        return np.stack([np.stack(row, -1) for row in rows], -2)

    def c_matrix(self, U, geo):
        return self.local_jacobian(U, geo) @ self.steady_operator(U, geo)

    def branch_reference(self, U, geo):
        return U[0]

    def recover(self, E, geo, integral, reference):
        m, n, K, L = E
        I = zero_integral(integral, m)
        rho, failed, _ = solve_euler_density(K, L, m, n, geo, I, reference, self.gamma)
        _, energy = energy_from_equilibrium(rho, m, n, L, geo, self.gamma)
        shape = rho.shape
        return np.stack([rho, np.broadcast_to(m, shape), np.broadcast_to(n, shape), energy]), failed

    def interface_jump_term(self, U_hat_minus, U_hat_plus, geo_minus, geo_plus):
        rho_mean = 0.5 * (U_hat_minus[0] + U_hat_plus[0])
        zero = np.zeros_like(rho_mean)
        return np.stack([zero, -rho_mean * (geo_plus - geo_minus), zero, zero])
