"""
Three-stage third-order SSP Runge-Kutta integration with CFL-limited steps.
"""

import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from src.errors import ConfigurationError, NumericalError


logger = logging.getLogger(__name__)

DEFAULT_CFL = 0.5
DEFAULT_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class TimeControls:
    """
    Attributes:
        cfl: CFL number in (0, 1]
        t_final: Final time
        max_steps: Safety bound on the number of steps
        dt_exponent: If set, the CFL step is multiplied by dx^(dt_exponent - 1)
            so that dt scales like dx^dt_exponent (5/3 for fifth-order studies)
        log_every: Log progress every this many steps (0 disables)
    """

    cfl: float = DEFAULT_CFL
    t_final: float = 1.0
    max_steps: int = DEFAULT_MAX_STEPS
    dt_exponent: Optional[float] = None
    log_every: int = 0

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigurationError(f"Invalid cfl: {self.cfl}. Must be in (0, 1]")
        if self.t_final < 0.0:
            raise ConfigurationError(f"Invalid t_final: {self.t_final}. Must be >= 0")
        if self.max_steps < 1:
            raise ConfigurationError(f"Invalid max_steps: {self.max_steps}. Must be >= 1")
        if self.dt_exponent is not None and self.dt_exponent < 1.0:
            raise ConfigurationError(f"Invalid dt_exponent: {self.dt_exponent}. Must be >= 1")


@dataclass
class IntegrationResult:
    U: np.ndarray
    t: float
    steps: int
    runtime: float


def ssp_rk3_step(U: np.ndarray, dt: float, rhs: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """
    One SSP-RK3 step; every stage is a convex combination of forward Euler steps.
    """
    U1 = U + dt * rhs(U)
    U2 = 0.75 * U + 0.25 * (U1 + dt * rhs(U1))
    return U / 3.0 + 2.0 / 3.0 * (U2 + dt * rhs(U2))


def compute_dt(speed_ratio: float, cfl: float, dx: float,
               dt_exponent: Optional[float] = None) -> float:
    """
    CFL time step from the maximal speed-to-width ratio.

    Args:
        speed_ratio: max|lambda|/dx in 1-D, max|lambda^x|/dx + max|lambda^y|/dy in 2-D
        cfl: CFL number
        dx: Smallest cell width (used when all speeds vanish)
        dt_exponent: Optional exponent p giving dt proportional to dx^p

    Raises:
        NumericalError: If the speed ratio is not finite
    """
    if not np.isfinite(speed_ratio):
        raise NumericalError(f"Non-finite wave speed ratio: {speed_ratio}")
    dt = cfl * dx if speed_ratio <= 0.0 else cfl / speed_ratio
    if dt_exponent is not None:
        dt *= dx ** (dt_exponent - 1.0)
    return dt


def integrate(U0: np.ndarray, discretization, controls: TimeControls,
              t_start: float = 0.0, callback: Optional[Callable[[float, np.ndarray], None]] = None
              ) -> IntegrationResult:
    """
    Advance U0 from t_start to controls.t_final.

    Speeds are re-evaluated from the cell states once per step and the last
    step is clipped so that the final time is hit exactly.

    Args:
        U0: Interior states
        discretization: Object with rhs(U), max_speed_ratio(U) and a grid
        controls: Time controls
        t_start: Initial time
        callback: Called as callback(t, U) after every step

    Raises:
        NumericalError: If max_steps is exceeded
    """
    grid = discretization.grid
    dx = grid.dx if hasattr(grid, 'dx') else min(grid.x.dx, grid.y.dx)
    U = np.array(U0, dtype=float, copy=True)
    t = float(t_start)
    steps = 0
    started = time.time()

    while t < controls.t_final:
        if steps >= controls.max_steps:
            raise NumericalError(f"Step limit {controls.max_steps} reached at t={t:.6g} < {controls.t_final}")
        dt = compute_dt(discretization.max_speed_ratio(U), controls.cfl, dx, controls.dt_exponent)
        last = t + dt >= controls.t_final
        if last:
            dt = controls.t_final - t
        U = ssp_rk3_step(U, dt, discretization.rhs)
        t = controls.t_final if last else t + dt
        steps += 1
        if callback is not None:
            callback(t, U)
        if controls.log_every and steps % controls.log_every == 0:
            logger.info(f"Step {steps}: t={t:.6g}, dt={dt:.3e}")

    runtime = time.time() - started
    logger.info(f"Integrated to t={t:.6g} in {steps} steps ({runtime:.2f}s)")
    return IntegrationResult(U, t, steps, runtime)
