"""
Time-independent geometry data (cross-section, bottom or potential).
Values and slopes are stored on the extended grid, ghost cells included.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from src.mesh.grid import GridSpec1D, GridSpec2D


@dataclass(frozen=True)
class Geometry:
    """
    Geometry along one sweep line.

    Attributes:
        values: Cell-center values, shape (..., n_extended)
        slopes: Derivative along the sweep direction, same shape
    """

    values: np.ndarray
    slopes: np.ndarray

    @classmethod
    def flat(cls, grid: GridSpec1D, level: float = 0.0) -> 'Geometry':
        values = np.full(grid.n_extended, float(level))
        return cls(values, np.zeros_like(values))

    @classmethod
    def from_function(cls, grid: GridSpec1D, func: Callable[[np.ndarray], np.ndarray],
                      derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
                      ) -> 'Geometry':
        """
        Sample an analytic profile at every extended cell center.

        Piecewise-constant profiles should pass a derivative returning zeros,
        otherwise the slope is estimated by second-order differences.
        """
        x = grid.extended_centers()
        values = np.asarray(func(x), dtype=float) * np.ones_like(x)
        if derivative is None:
            slopes = np.gradient(values, grid.dx, edge_order=2)
        else:
            slopes = np.asarray(derivative(x), dtype=float) * np.ones_like(x)
        return cls(values, slopes)

    @classmethod
    def tabulated(cls, grid: GridSpec1D, interior: np.ndarray) -> 'Geometry':
        """Tabulated interior values, extended to the ghosts by zero-order copies."""
        g = grid.ghost_width
        values = np.pad(np.asarray(interior, dtype=float), (g, g), mode='edge')
        return cls(values, np.gradient(values, grid.dx, edge_order=2))


@dataclass(frozen=True)
class Geometry2D:
    values: np.ndarray
    slope_x: np.ndarray
    slope_y: np.ndarray

    @classmethod
    def from_function(cls, grid: GridSpec2D,
                      func: Callable[[np.ndarray, np.ndarray], np.ndarray],
                      gradient: Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]
                      ) -> 'Geometry2D':
        X, Y = grid.extended_centers()
        gx, gy = gradient(X, Y)
        ones = np.ones_like(X)
        return cls(np.asarray(func(X, Y)) * ones, np.asarray(gx) * ones, np.asarray(gy) * ones)

    def sweep_x(self, rows: slice) -> Geometry:
        """Geometry for x-sweeps over the given rows, shape (rows, nx_ext)."""
        return Geometry(self.values[rows, :], self.slope_x[rows, :])

    def sweep_y(self, columns: slice) -> Geometry:
        """Geometry for y-sweeps over the given columns, shape (columns, ny_ext)."""
        return Geometry(self.values[:, columns].T, self.slope_y[:, columns].T)
