"""Uniform grids, geometry data and ghost-cell boundary handling."""

from src.mesh.grid import GHOST_WIDTH, GridSpec1D, GridSpec2D
from src.mesh.boundary import (
    BoundaryCondition, BoundaryKind, ComponentRule, fill_ghosts, fill_ghosts_2d,
)
from src.mesh.geometry import Geometry, Geometry2D

__all__ = [
    'GHOST_WIDTH', 'GridSpec1D', 'GridSpec2D',
    'BoundaryCondition', 'BoundaryKind', 'ComponentRule', 'fill_ghosts', 'fill_ghosts_2d',
    'Geometry', 'Geometry2D',
]
