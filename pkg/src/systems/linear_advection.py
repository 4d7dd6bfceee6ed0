"""Scalar linear advection u_t + a u_x = 0, used for convergence checks."""

from typing import Dict, Optional

import numpy as np

from src.systems.base import ModelSystem


class LinearAdvection(ModelSystem):
    name = 'advection'
    component_names = ('u',)
    equilibrium_names = ('u',)

    def __init__(self, velocity: float = 1.0):
        self.velocity = float(velocity)

    def flux(self, U, geo):
        return self.velocity * U

    def wave_speeds(self, U, geo):
        a = np.full_like(U[0], self.velocity)
        return a, a

    def quasilinear_matrix(self, U, geo):
        return np.full(U[0].shape + (1, 1), self.velocity)

    def source_integrand(self, U, U_x, geo, geo_x):
        return np.zeros_like(U)

    def validate(self, U, geo):
        pass

    def primitives(self, U, geo) -> Dict[str, np.ndarray]:
        return {'u': U[0]}

    def equilibrium(self, U, geo, integral: Optional[np.ndarray] = None):
        return np.array(U, dtype=float, copy=True)

    def c_matrix(self, U, geo):
        return self.quasilinear_matrix(U, geo)

    def recover(self, E, geo, integral, reference):
        U = np.array(E, dtype=float, copy=True)
        return U, np.zeros(U.shape[1:], dtype=bool)

    def interface_jump_term(self, U_hat_minus, U_hat_plus, geo_minus, geo_plus):
        return np.zeros_like(U_hat_minus)
