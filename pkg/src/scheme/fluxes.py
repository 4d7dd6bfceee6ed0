"""
Central-upwind finite-volume flux on global fluxes and the A-WENO
high-order correction.
"""

from typing import Optional, Tuple

import numpy as np

from src.errors import StateError
from src.systems.base import ModelSystem


SPEED_GAP = 1e-10


def one_sided_speeds(model: ModelSystem, U_minus: np.ndarray, U_plus: np.ndarray,
                     geo_minus: np.ndarray, geo_plus: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    One-sided local speed bounds a^- <= 0 <= a^+ at every interface.

    Raises:
        StateError: If any speed is NaN
    """
    lo_minus, hi_minus = model.wave_speeds(U_minus, geo_minus)
    lo_plus, hi_plus = model.wave_speeds(U_plus, geo_plus)
    a_plus = np.maximum(np.maximum(hi_minus, hi_plus), 0.0)
    a_minus = np.minimum(np.minimum(lo_minus, lo_plus), 0.0)
    bad = ~np.isfinite(a_plus) | ~np.isfinite(a_minus)
    if np.any(bad):
        raise StateError(f"Non-finite wave speeds at interfaces {np.flatnonzero(bad)[:10].tolist()}")
    return a_minus, a_plus


def central_upwind_flux(K_minus: np.ndarray, K_plus: np.ndarray,
                        U_hat_minus: np.ndarray, U_hat_plus: np.ndarray,
                        a_minus: np.ndarray, a_plus: np.ndarray,
                        diffusion: Optional[np.ndarray] = None) -> np.ndarray:
    """
    K^FV = (a+ K- - a- K+)/(a+ - a-) + a+ a-/(a+ - a-) (U-hat+ - U-hat-).

    Interfaces with a+ - a- below SPEED_GAP return the average of K- and K+.

    Args:
        K_minus, K_plus: Global fluxes left/right of each interface, (d, ...)
        U_hat_minus, U_hat_plus: Hatted states, (d, ...)
        a_minus, a_plus: One-sided speeds, (...)
        diffusion: Optional multiplier in [0, 1] on the numerical diffusion
    """
    gap = a_plus - a_minus
    degenerate = gap < SPEED_GAP
    safe = np.where(degenerate, 1.0, gap)
    upwind = (a_plus * K_minus - a_minus * K_plus) / safe
    coefficient = a_plus * a_minus / safe
    if diffusion is not None:
        coefficient = coefficient * diffusion
    flux = upwind + coefficient * (U_hat_plus - U_hat_minus)
    return np.where(degenerate, 0.5 * (K_minus + K_plus), flux)


def diffusion_switch(E_minus: np.ndarray, E_plus: np.ndarray, threshold: float) -> np.ndarray:
    """Zero where all equilibrium jumps are below threshold * (1 + |E|), one elsewhere."""
    scale = 1.0 + np.maximum(np.abs(E_minus), np.abs(E_plus))
    quiet = np.all(np.abs(E_plus - E_minus) <= threshold * scale, axis=0)
    return np.where(quiet, 0.0, 1.0)


def correction_terms(K_fv: np.ndarray, dx: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Fourth-order K_xx and second-order K_xxxx on the five-interface stencils.

    Args:
        K_fv: Finite-volume fluxes on consecutive interfaces, (..., F)

    Returns:
        (K_xx, K_xxxx) at the interfaces 2..F-3, each (..., F-4)
    """
    k_m2, k_m1, k_0 = K_fv[..., :-4], K_fv[..., 1:-3], K_fv[..., 2:-2]
    k_p1, k_p2 = K_fv[..., 3:-1], K_fv[..., 4:]
    K_xx = (-k_m2 + 16.0 * k_m1 - 30.0 * k_0 + 16.0 * k_p1 - k_p2) / (12.0 * dx ** 2)
    K_xxxx = (k_m2 - 4.0 * k_m1 + 6.0 * k_0 - 4.0 * k_p1 + k_p2) / dx ** 4
    return K_xx, K_xxxx


def aweno_flux(K_fv: np.ndarray, K_xx: np.ndarray, K_xxxx: np.ndarray, dx: float) -> np.ndarray:
    """K^FV - dx^2/24 K_xx + 7 dx^4/5760 K_xxxx."""
    return K_fv - dx ** 2 / 24.0 * K_xx + 7.0 * dx ** 4 / 5760.0 * K_xxxx
