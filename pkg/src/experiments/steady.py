"""
Discrete steady states of the preset problems.

Steady states live on the extended grid so that they can also serve as the
reference of Free boundaries. Computed states are cached with joblib.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import joblib
import numpy as np

from src.errors import NumericalError, RecoveryError
from src.mesh.grid import GridSpec1D, GridSpec2D
from src.quadrature.ladders import running_integrals
from src.systems.euler2d import EulerGravitySweep
from src.systems.nozzle import NozzleFlow, solve_nozzle_density
from src.systems.two_layer import TwoLayerShallowWater


logger = logging.getLogger(__name__)

BRANCHES = ('supersonic', 'subsonic')
FIXED_POINT_TOLERANCE = 1e-15
FIXED_POINT_ACCEPT = 1e-12
MAX_FIXED_POINT_ITERATIONS = 200


def nozzle_steady_state(model: NozzleFlow, sigma: np.ndarray, q: float, E: float,
                        branch: str = 'supersonic') -> np.ndarray:
    """
    Nozzle state with constant (q, E) on every cell of sigma.

    Args:
        model: Nozzle model (supplies gamma and kappa)
        sigma: Cross-section at the cell centers
        q: Discharge
        E: Energy
        branch: 'supersonic' or 'subsonic' density root

    Returns:
        U = (sigma*rho, q) with the shape (2,) + sigma.shape

    Raises:
        ValueError: On an unknown branch
        RecoveryError: If some cell has no root on the branch
    """
    if branch not in BRANCHES:
        raise ValueError(f"Invalid branch: {branch}. Must be one of {list(BRANCHES)}")
    # any density below the sonic one selects the supersonic root
    reference = np.zeros_like(sigma) if branch == 'supersonic' else np.full_like(sigma, np.inf)
    rho, failed = solve_nozzle_density(E, q, sigma, reference, model.gamma, model.kappa)
    if np.any(failed):
        raise RecoveryError(f"No {branch} nozzle density for q={q}, E={E}",
                            cells=np.flatnonzero(failed).tolist(), stage='steady state')
    return np.stack([sigma * rho, np.full_like(rho, q)])


def two_layer_steady_state(model: TwoLayerShallowWater, Z: np.ndarray, left_state: np.ndarray,
                           depth_guess: np.ndarray) -> np.ndarray:
    """
    Two-layer state with the equilibrium variables of left_state everywhere.

    Args:
        model: Two-layer model
        Z: Bottom at the cell centers
        left_state: (h1, q1, h2, q2) at a cell with bottom Z[0]
        depth_guess: (h1, h2) per cell selecting the roots

    Raises:
        RecoveryError: If the depth iteration fails anywhere
    """
    state = np.asarray(left_state, dtype=float)[:, None]
    E = model.equilibrium(state, np.asarray(Z[:1], dtype=float))[:, 0]
    E = np.broadcast_to(E[:, None], (E.size,) + Z.shape)
    U, failed = model.recover(E, Z, None, depth_guess)
    if np.any(failed):
        raise RecoveryError("Two-layer steady state has no root near the guess",
                            cells=np.flatnonzero(failed).tolist(), stage='steady state')
    return U


def hydrostatic_profile(line: GridSpec1D, coefficient: float, mode: str = 'weno') -> np.ndarray:
    """
    Discrete solution of g + coefficient * I[g] = exp(-coefficient * x_anchor).

    I is the running integral from the grid anchor computed with the same
    ladder as the scheme, so p + I[rho] is constant to round-off for
    rho = coefficient * g, p = g.

    Raises:
        NumericalError: If the fixed-point iteration stalls
    """
    x = line.extended_centers()
    level = np.exp(-coefficient * line.anchor)
    profile = np.exp(-coefficient * x)
    change = np.inf
    for iteration in range(MAX_FIXED_POINT_ITERATIONS):
        updated = level - coefficient * running_integrals(profile, line.dx, mode).center
        change = float(np.max(np.abs(updated - profile)))
        profile = updated
        if change <= FIXED_POINT_TOLERANCE * level:
            break
    if change > FIXED_POINT_ACCEPT * level:
        raise NumericalError(f"Hydrostatic profile did not converge (last change {change:.3e})")
    logger.debug(f"Hydrostatic profile converged after {iteration + 1} iterations")
    return profile


def hydrostatic_steady_state(model: EulerGravitySweep, grid: GridSpec2D, coefficient: float = 1.21,
                             mode: str = 'weno') -> np.ndarray:
    """
    Extended 2-D state rho = c*g(x)g(y), p = g(x)g(y), u = v = 0 for phi = x + y.

    Returns:
        Array of shape (4, ny_ext, nx_ext)
    """
    gx = hydrostatic_profile(grid.x, coefficient, mode)
    gy = hydrostatic_profile(grid.y, coefficient, mode)
    X, Y = grid.extended_centers()
    p = gy[:, None] * gx[None, :]
    rho = coefficient * p
    energy = p / (model.gamma - 1.0) + rho * (X + Y)
    zero = np.zeros_like(p)
    return np.stack([rho, zero, zero, energy])


def cache_path(directory: Path, name: str, key: Dict[str, Any]) -> Path:
    """Cache file named after the problem and the parameters it depends on."""
    suffix = '_'.join(f"{k}-{v}" for k, v in sorted(key.items()))
    return Path(directory) / f"{name}_{suffix}.joblib"


def save_steady_state(path: Path, state: np.ndarray, key: Dict[str, Any]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    joblib.dump({'state': state, 'key': key}, path)
    logger.info(f"Saved steady state to {path}")


def load_steady_state(path: Path, key: Dict[str, Any]) -> Optional[np.ndarray]:
    """
    Cached state, or None if the file is missing or was built with other parameters.
    """
    path = Path(path)
    if not path.exists():
        logger.info(f"No cached steady state at {path}")
        return None
    payload = joblib.load(path)
    if payload.get('key') != key:
        logger.info(f"Ignoring stale steady state at {path}")
        return None
    logger.info(f"Loaded steady state from {path}")
    return payload['state']
