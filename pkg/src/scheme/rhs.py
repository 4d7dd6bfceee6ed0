"""
Semi-discrete right-hand side dU/dt = -(K_{j+1/2} - K_{j-1/2})/dx [- (L_{k+1/2} - L_{k-1/2})/dy].

Pipeline per sweep: ghost cells, running integrals, interface states,
global source, central-upwind fluxes, A-WENO corrections, divided differences.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from src.errors import InputError, SolverError
from src.mesh.boundary import BoundaryCondition, fill_ghosts, fill_ghosts_2d
from src.mesh.geometry import Geometry, Geometry2D
from src.mesh.grid import GridSpec1D, GridSpec2D
from src.quadrature.ladders import running_integrals
from src.scheme.fluxes import (
    aweno_flux, central_upwind_flux, correction_terms, diffusion_switch, one_sided_speeds,
)
from src.scheme.interface_states import SweepGeometry, build_interface_states
from src.scheme.parallel import map_blocks
from src.scheme.source_terms import global_source
from src.scheme.variants import SchemeOptions
from src.systems.base import ModelSystem


logger = logging.getLogger(__name__)


@dataclass
class SchemeDiagnostics:
    """Fallback counters of one or more RHS evaluations."""

    hyperbolicity_fallbacks: int = 0
    recovery_fallbacks: int = 0

    def __add__(self, other: 'SchemeDiagnostics') -> 'SchemeDiagnostics':
        return SchemeDiagnostics(self.hyperbolicity_fallbacks + other.hyperbolicity_fallbacks,
                                 self.recovery_fallbacks + other.recovery_fallbacks)

    def report(self, model_name: str) -> None:
        if self.hyperbolicity_fallbacks:
            logger.warning(f"{model_name}: {self.hyperbolicity_fallbacks} cells fell back to the identity basis")
        if self.recovery_fallbacks:
            logger.warning(f"{model_name}: {self.recovery_fallbacks} equilibrium recoveries used a fallback")


def flux_divergence(U_ext: np.ndarray, geometry: SweepGeometry, model: ModelSystem,
                    dx: float, options: SchemeOptions) -> Tuple[np.ndarray, SchemeDiagnostics]:
    """
    -(K_{j+1/2} - K_{j-1/2})/dx along the last axis.

    Args:
        U_ext: Ghost-filled states of one or more sweep lines, (d, ..., N + 10)
        geometry: Matching sweep geometry
        model: Physical model (in the sweep frame)
        dx: Cell width along the sweep
        options: Scheme options

    Returns:
        (divergence of shape (d, ..., N), diagnostics)
    """
    integrals = None
    if options.variant.well_balanced and model.has_integral:
        integrand = model.equilibrium_integrand(U_ext, geometry.values, geometry.slopes)
        integrals = running_integrals(integrand, dx, options.interpolation_mode)

    states = build_interface_states(U_ext, geometry, integrals, model, options)
    R_minus, R_plus, failed = global_source(states, geometry, integrals, model, dx, options)

    K_minus = model.flux(states.U_minus, geometry.minus) - R_minus
    K_plus = model.flux(states.U_plus, geometry.plus) - R_plus
    a_minus, a_plus = one_sided_speeds(model, states.U_minus, states.U_plus, geometry.minus, geometry.plus)

    diffusion = None
    if options.diffusion_threshold is not None and states.E_minus is not None:
        diffusion = diffusion_switch(states.E_minus, states.E_plus, options.diffusion_threshold)
    K_fv = central_upwind_flux(K_minus, K_plus, states.U_hat_minus, states.U_hat_plus,
                               a_minus, a_plus, diffusion)

    if options.corrections:
        K = aweno_flux(K_fv[..., 2:-2], *correction_terms(K_fv, dx), dx)
    else:
        K = K_fv[..., 2:-2]
    diagnostics = SchemeDiagnostics(states.lost, states.failed + failed)
    return -(K[..., 1:] - K[..., :-1]) / dx, diagnostics


def _check_finite(U: np.ndarray) -> None:
    if not np.all(np.isfinite(U)):
        bad = np.flatnonzero(~np.isfinite(U))[:10].tolist()
        raise InputError(f"Non-finite state entries {bad}")


class SemiDiscretization1D:
    """
    Right-hand side of one 1-D problem.

    Attributes:
        reference: Extended steady state used by Free boundaries (optional)
        diagnostics: Counters of the last RHS evaluation
    """

    dimension = 1

    def __init__(self, model: ModelSystem, grid: GridSpec1D, geometry: Geometry,
                 bc: BoundaryCondition, options: Optional[SchemeOptions] = None,
                 reference: Optional[np.ndarray] = None):
        self.model = model
        self.grid = grid
        self.geometry = geometry
        self.bc = bc
        self.options = options or SchemeOptions()
        self.reference = reference
        self.sweep = SweepGeometry.from_geometry(geometry, self.options.reconstruction)
        self.diagnostics = SchemeDiagnostics()

    @property
    def interior_geometry(self) -> np.ndarray:
        return self.geometry.values[self.grid.interior]

    def extend(self, U: np.ndarray) -> np.ndarray:
        return fill_ghosts(U, self.bc, self.grid, self.reference)

    def rhs(self, U: np.ndarray) -> np.ndarray:
        """
        dU/dt on the interior cells.

        Raises:
            InputError: On non-finite states
            SolverError: On any pipeline failure
        """
        _check_finite(U)
        divergence, self.diagnostics = flux_divergence(self.extend(U), self.sweep, self.model,
                                                       self.grid.dx, self.options)
        self.diagnostics.report(self.model.name)
        return divergence

    __call__ = rhs

    def max_speed_ratio(self, U: np.ndarray) -> float:
        """max |lambda| / dx over the interior cells."""
        geo = self.interior_geometry
        self.model.validate(U, geo)
        lo, hi = self.model.wave_speeds(U, geo)
        return float(np.max(np.maximum(np.abs(lo), np.abs(hi)))) / self.grid.dx


class SemiDiscretization2D:
    """
    Right-hand side of one 2-D problem as the sum of an x- and a y-sweep.

    Sweep lines are split into blocks that run on the parallel-for.
    """

    dimension = 2

    def __init__(self, model: ModelSystem, grid: GridSpec2D, geometry: Geometry2D,
                 bc: BoundaryCondition, options: Optional[SchemeOptions] = None,
                 reference: Optional[np.ndarray] = None, threads: Optional[int] = None):
        self.model = model
        self.grid = grid
        self.geometry = geometry
        self.bc = bc
        self.options = options or SchemeOptions()
        self.reference = reference
        self.threads = threads
        g = grid.ghost_width
        ny, nx = grid.shape
        self.rows = slice(g, g + ny)
        self.columns = slice(g, g + nx)
        recon = self.options.reconstruction
        self.sweep_x = SweepGeometry.from_geometry(geometry.sweep_x(self.rows), recon)
        self.sweep_y = SweepGeometry.from_geometry(geometry.sweep_y(self.columns), recon)
        self.order_x = list(model.sweep_order('x'))
        self.order_y = list(model.sweep_order('y'))
        self.diagnostics = SchemeDiagnostics()

    @property
    def interior_geometry(self) -> np.ndarray:
        return self.geometry.values[self.rows, self.columns]

    def extend(self, U: np.ndarray) -> np.ndarray:
        return fill_ghosts_2d(U, self.bc, self.grid, self.reference)

    def _sweep(self, lines: np.ndarray, sweep: SweepGeometry, dx: float):
        def run(block: slice):
            return flux_divergence(lines[:, block], sweep.rows(block), self.model, dx, self.options)

        results = map_blocks(run, lines.shape[1], self.threads)
        divergence = np.concatenate([r[0] for r in results], axis=1)
        diagnostics = SchemeDiagnostics()
        for _, d in results:
            diagnostics = diagnostics + d
        return divergence, diagnostics

    def rhs(self, U: np.ndarray) -> np.ndarray:
        """dU/dt on the interior cells, shape (d, ny, nx)."""
        _check_finite(U)
        U_ext = self.extend(U)

        rows = U_ext[self.order_x][:, self.rows, :]
        div_x, diag_x = self._sweep(rows, self.sweep_x, self.grid.x.dx)
        div_x = div_x[np.argsort(self.order_x)]

        columns = np.swapaxes(U_ext[self.order_y][:, :, self.columns], 1, 2)
        div_y, diag_y = self._sweep(columns, self.sweep_y, self.grid.y.dx)
        div_y = np.swapaxes(div_y[np.argsort(self.order_y)], 1, 2)

        self.diagnostics = diag_x + diag_y
        self.diagnostics.report(self.model.name)
        return div_x + div_y

    __call__ = rhs

    def max_speed_ratio(self, U: np.ndarray) -> float:
        """max |lambda^x|/dx + max |lambda^y|/dy over the interior cells."""
        geo = self.interior_geometry
        self.model.validate(U, geo)
        lo, hi = self.model.wave_speeds(U[self.order_x], geo)
        speed_x = float(np.max(np.maximum(np.abs(lo), np.abs(hi))))
        lo, hi = self.model.wave_speeds(U[self.order_y], geo)
        speed_y = float(np.max(np.maximum(np.abs(lo), np.abs(hi))))
        return speed_x / self.grid.x.dx + speed_y / self.grid.y.dx


Discretization = Union[SemiDiscretization1D, SemiDiscretization2D]


def semidiscrete_rhs(U: np.ndarray, discretization: Discretization) -> np.ndarray:
    """
    Evaluate dU/dt, logging the model of any pipeline failure.

    Raises:
        SolverError: Re-raised after logging
    """
    try:
        return discretization.rhs(U)
    except SolverError as e:
        logger.error(f"RHS evaluation failed for {discretization.model.name}: {str(e)}")
        raise
