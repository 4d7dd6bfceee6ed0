"""
Self-convergence studies on smooth periodic presets.

Consecutive meshes must double. The fine solution is restricted to the
coarse centers (which are fine-grid interfaces) by sixth-order midpoint
interpolation, and orders come from consecutive error pairs.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from src.errors import ConfigurationError
from src.experiments.output import write_table
from src.experiments.presets import build_convergence_preset
from src.scheme.variants import SchemeOptions
from src.timestepping.ssp_rk3 import DEFAULT_CFL, TimeControls, integrate


logger = logging.getLogger(__name__)

DT_EXPONENT = 5.0 / 3.0
MIDPOINT_WEIGHTS = np.array([3.0, -25.0, 150.0, 150.0, -25.0, 3.0]) / 256.0


def restrict_periodic(fine: np.ndarray) -> np.ndarray:
    """
    Periodic fine-grid values at the coarse cell centers.

    Coarse center j sits between fine cells 2j and 2j+1 (0-based), so it is
    interpolated from fine cells 2j-2..2j+3.
    """
    fine = np.asarray(fine, dtype=float)
    if fine.shape[-1] % 2:
        raise ConfigurationError(f"Fine mesh must have an even number of cells, got {fine.shape[-1]}")
    shifted = [np.roll(fine, -offset, axis=-1)[..., 0::2] for offset in range(-2, 4)]
    return sum(w * s for w, s in zip(MIDPOINT_WEIGHTS, shifted))


def solve_preset(preset: str, n_cells: int, options: SchemeOptions, t_final: Optional[float],
                 cfl: float = DEFAULT_CFL, dt_exponent: Optional[float] = DT_EXPONENT) -> np.ndarray:
    setup = build_convergence_preset(preset, n_cells)
    controls = TimeControls(cfl, setup.t_final if t_final is None else t_final,
                            dt_exponent=dt_exponent)
    return integrate(setup.initial, setup.discretization(options), controls).U


def convergence_study(preset: str, options: SchemeOptions, meshes: Sequence[int],
                      t_final: Optional[float] = None, cfl: float = DEFAULT_CFL,
                      dt_exponent: Optional[float] = DT_EXPONENT) -> pd.DataFrame:
    """
    Observed orders of one scheme on a doubling mesh sequence.

    Args:
        preset: Convergence preset name
        options: Scheme options
        meshes: Increasing cell counts, each twice the previous one
        t_final: Final time (preset default if None)
        cfl: CFL number
        dt_exponent: dt scales like dx^dt_exponent

    Returns:
        Table with columns cells, error (L1 against the restricted next mesh)
        and order; the finest mesh only supplies the reference.

    Raises:
        ConfigurationError: On fewer than three meshes or meshes that do not double
    """
    meshes = [int(n) for n in meshes]
    if len(meshes) < 3:
        raise ConfigurationError(f"Need at least three meshes, got {meshes}")
    if any(fine != 2 * coarse for coarse, fine in zip(meshes[:-1], meshes[1:])):
        raise ConfigurationError(f"Meshes must double, got {meshes}")

    solutions = [solve_preset(preset, n, options, t_final, cfl, dt_exponent) for n in meshes]
    rows: List[dict] = []
    for n, coarse, fine in zip(meshes[:-1], solutions[:-1], solutions[1:]):
        error = float(np.sum(np.abs(coarse - restrict_periodic(fine))) / n)
        order = np.nan if not rows else float(np.log2(rows[-1]['error'] / error))
        rows.append({'cells': n, 'error': error, 'order': order})
        logger.info(f"{preset} {options.variant.label}: N={n}, error={error:.3e}, order={order:.2f}")
    return pd.DataFrame(rows)


def write_convergence(table: pd.DataFrame, directory: Path, preset: str, label: str) -> Path:
    return write_table(table, Path(directory) / 'convergence' / f"{preset}_{label}.csv")
