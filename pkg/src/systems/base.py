"""
Model-system contract for balance laws U_t + F(U)_x = B(U) U_x + S(U).

Arrays carry the component axis first: states have shape (d, ...), while
geometry and running integrals have shape (...). Matrices are returned
with shape (..., d, d).
"""

from abc import ABC, abstractmethod
from typing import Dict, Optional, Tuple

import numpy as np

from src.characteristics.lcd import CharBasis, eigendecompose_batch
from src.errors import RecoveryError, StateError


class ModelSystem(ABC):
    """
    Behavioral contract of one physical model.

    Class attributes:
        name: Identifier used by configuration files
        component_names: Names of the conserved variables
        equilibrium_names: Names of the equilibrium variables
        has_integral: E contains a running integral of equilibrium_integrand
        integral_is_source: The global source R is read off the interface
            running integral (source_from_integral) instead of being chained
    """

    name: str = ''
    component_names: Tuple[str, ...] = ()
    equilibrium_names: Tuple[str, ...] = ()
    geometry_name: str = 'geometry'
    integral_is_source: bool = False

    @property
    def n_components(self) -> int:
        return len(self.component_names)

    @property
    def has_integral(self) -> bool:
        return False

    # physics

    @abstractmethod
    def flux(self, U: np.ndarray, geo: np.ndarray) -> np.ndarray:
        """Physical flux F(U)."""

    @abstractmethod
    def wave_speeds(self, U: np.ndarray, geo: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Smallest and largest eigenvalue of dF/dU - B."""

    @abstractmethod
    def quasilinear_matrix(self, U: np.ndarray, geo: np.ndarray) -> np.ndarray:
        """The matrix dF/dU - B, shape (..., d, d)."""

    @abstractmethod
    def source_integrand(self, U: np.ndarray, U_x: np.ndarray, geo: np.ndarray,
                         geo_x: np.ndarray) -> np.ndarray:
        """Pointwise B(U) U_x + S(U)."""

    @abstractmethod
    def validate(self, U: np.ndarray, geo: np.ndarray) -> None:
        """Raise StateError on inadmissible states."""

    @abstractmethod
    def primitives(self, U: np.ndarray, geo: np.ndarray) -> Dict[str, np.ndarray]:
        """Named primitive fields for output."""

    # equilibrium variables

    def equilibrium_integrand(self, U: np.ndarray, geo: np.ndarray,
                              geo_slope: np.ndarray) -> np.ndarray:
        """Integrand whose running integral enters E (zero for local E)."""
        return np.zeros(np.shape(geo))

    @abstractmethod
    def equilibrium(self, U: np.ndarray, geo: np.ndarray,
                    integral: Optional[np.ndarray] = None) -> np.ndarray:
        """Equilibrium variables E(U)."""

    @abstractmethod
    def c_matrix(self, U: np.ndarray, geo: np.ndarray) -> np.ndarray:
        """C = (dW/dU) M with W the local part of E."""

    def characteristic_basis(self, U: np.ndarray, geo: np.ndarray) -> Tuple[CharBasis, np.ndarray]:
        """Eigenvectors of C per cell; entries that lose hyperbolicity fall back to identity."""
        return eigendecompose_batch(self.c_matrix(U, geo))

    def branch_reference(self, U: np.ndarray, geo: np.ndarray) -> np.ndarray:
        """Quantity of a state that selects the root in recover()."""
        return U

    @abstractmethod
    def recover(self, E: np.ndarray, geo: np.ndarray, integral: Optional[np.ndarray],
                reference: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Conserved variables from equilibrium variables.

        Args:
            E: Equilibrium variables, shape (d, ...)
            geo: Geometry at the recovery points
            integral: Running integral at the recovery points (or None)
            reference: Output of branch_reference() for the cells whose
                regime the recovered state should share

        Returns:
            (U, failed) where failed flags entries that used a fallback
        """

    # global flux

    @abstractmethod
    def interface_jump_term(self, U_hat_minus: np.ndarray, U_hat_plus: np.ndarray,
                            geo_minus: np.ndarray, geo_plus: np.ndarray) -> np.ndarray:
        """Linear-path increment of R across an interface."""

    def source_from_integral(self, integral: np.ndarray) -> np.ndarray:
        raise NotImplementedError(f"{self.name} does not read R off its running integral")

    def sweep_order(self, axis: str) -> Tuple[int, ...]:
        """Component permutation mapping the given sweep onto x-sweep formulas."""
        return tuple(range(self.n_components))

    # derived operations

    def flux_and_speeds(self, U: np.ndarray, geo: np.ndarray):
        """
        Flux and extreme wave speeds of admissible states.

        Raises:
            StateError: On inadmissible states
        """
        self.validate(U, geo)
        lo, hi = self.wave_speeds(U, geo)
        return self.flux(U, geo), lo, hi

    def steady_path_jump(self, E_minus: np.ndarray, E_plus: np.ndarray,
                         geo_minus: np.ndarray, geo_plus: np.ndarray,
                         integral: Optional[np.ndarray],
                         ref_minus: np.ndarray, ref_plus: np.ndarray):
        """
        Increment of R across an interface along the steady path through
        the averaged equilibrium state.

        Returns:
            (jump, failed)
        """
        E_mean = 0.5 * (E_minus + E_plus)
        U_left, failed_left = self.recover(E_mean, geo_minus, integral, ref_minus)
        U_right, failed_right = self.recover(E_mean, geo_plus, integral, ref_plus)
        jump = self.flux(U_right, geo_plus) - self.flux(U_left, geo_minus)
        return jump, failed_left | failed_right

    def recover_strict(self, E: np.ndarray, geo: np.ndarray, integral: Optional[np.ndarray],
                       reference: np.ndarray) -> np.ndarray:
        """recover() that raises RecoveryError instead of falling back."""
        U, failed = self.recover(E, geo, integral, reference)
        if np.any(failed):
            cells = np.flatnonzero(np.asarray(failed)).tolist()
            raise RecoveryError(f"{self.name} recovery failed", cells=cells)
        return U


def require_positive(values: np.ndarray, label: str) -> None:
    """Raise StateError if any entry is nonpositive or not finite."""
    values = np.asarray(values)
    bad = ~(values > 0)
    if np.any(bad):
        first = np.flatnonzero(bad)[:5].tolist()
        raise StateError(f"Nonpositive {label} at entries {first}")


def zero_integral(integral: Optional[np.ndarray], like: np.ndarray) -> np.ndarray:
    if integral is None:
        return np.zeros(np.shape(like))
    return np.broadcast_to(np.asarray(integral, dtype=float), np.shape(like))
