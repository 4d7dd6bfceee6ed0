"""
Uniform cell-centered grids in 1-D and 2-D.
Cells are numbered j = 1..N; ghost cells extend the numbering to 1-G..N+G.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from src.errors import ConfigurationError


GHOST_WIDTH = 5  # interpolation stencils plus correction stencils reach j±5/2


@dataclass(frozen=True)
class GridSpec1D:
    """
    Uniform 1-D grid on [x_min, x_max] with ghost layers.

    Extended arrays are indexed c = 0..N+2G-1 and cell c carries the
    label j = c - G + 1, so the interior occupies c = G..G+N-1.
    """

    x_min: float
    x_max: float
    n_cells: int
    ghost_width: int = GHOST_WIDTH
    dx: float = field(init=False)

    def __post_init__(self):
        if self.n_cells < 1:
            raise ConfigurationError(f"Invalid n_cells: {self.n_cells}. Must be >= 1")
        if not self.x_max > self.x_min:
            raise ConfigurationError(
                f"Invalid domain: [{self.x_min}, {self.x_max}]. x_max must exceed x_min"
            )
        if self.ghost_width != GHOST_WIDTH:
            raise ConfigurationError(
                f"Invalid ghost_width: {self.ghost_width}. Must be {GHOST_WIDTH}"
            )
        object.__setattr__(self, 'dx', (self.x_max - self.x_min) / self.n_cells)

    @property
    def n_extended(self) -> int:
        return self.n_cells + 2 * self.ghost_width

    @property
    def interior(self) -> slice:
        """Slice selecting the interior cells of an extended array."""
        return slice(self.ghost_width, self.ghost_width + self.n_cells)

    @property
    def anchor(self) -> float:
        """Left anchor x_{-5/2} of the running integrals."""
        return self.x_min - 3 * self.dx

    def labels(self) -> np.ndarray:
        """Cell labels j of the extended array."""
        g = self.ghost_width
        return np.arange(1 - g, self.n_cells + g + 1)

    def centers(self) -> np.ndarray:
        j = np.arange(1, self.n_cells + 1)
        return self.x_min + (j - 0.5) * self.dx

    def extended_centers(self) -> np.ndarray:
        return self.x_min + (self.labels() - 0.5) * self.dx

    def interfaces(self) -> np.ndarray:
        """Interior interfaces x_{1/2}..x_{N+1/2}."""
        return self.x_min + np.arange(self.n_cells + 1) * self.dx


@dataclass(frozen=True)
class GridSpec2D:
    """
    Tensor-product grid. Fields are stored as (..., ny, nx) so that the
    x-direction is the last axis.
    """

    x: GridSpec1D
    y: GridSpec1D

    @classmethod
    def square(cls, lower: float, upper: float, n_cells: int) -> 'GridSpec2D':
        return cls(GridSpec1D(lower, upper, n_cells), GridSpec1D(lower, upper, n_cells))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.y.n_cells, self.x.n_cells)

    @property
    def extended_shape(self) -> Tuple[int, int]:
        return (self.y.n_extended, self.x.n_extended)

    @property
    def ghost_width(self) -> int:
        return self.x.ghost_width

    def centers(self) -> Tuple[np.ndarray, np.ndarray]:
        """Interior cell centers as (X, Y) arrays of shape (ny, nx)."""
        return np.meshgrid(self.x.centers(), self.y.centers())

    def extended_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x.extended_centers(), self.y.extended_centers())
