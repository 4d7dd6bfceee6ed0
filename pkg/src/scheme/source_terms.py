"""
Global source R of the global flux K = F - R.

R is anchored at x_{-5/2} with R = 0 and advanced across every working
cell by a cell increment and across every interface by a jump term.
"""

from typing import Optional, Tuple

import numpy as np

from src.quadrature.ladders import BOOLE, RunningIntegrals, nodal_derivative
from src.scheme.interface_states import InterfaceStates, SweepGeometry, check_recovery
from src.scheme.variants import SchemeOptions
from src.systems.base import ModelSystem


def node_sources(U_nodes: np.ndarray, geometry: SweepGeometry, model: ModelSystem,
                 dx: float) -> np.ndarray:
    """B U_x + S at the five nodes of every working cell, shape (d, ..., M, 5)."""
    U_x = nodal_derivative(U_nodes, 0.25 * dx)
    return model.source_integrand(U_nodes, U_x, geometry.nodes, geometry.slope_nodes)


def steady_profile_nodes(states: InterfaceStates, geometry: SweepGeometry,
                         integrals: Optional[RunningIntegrals], model: ModelSystem):
    """
    Nodes of the steady profile through each cell center: U recovered from the
    cell-center E with the node geometry.

    Returns:
        (U_star, failed) with U_star of shape (d, ..., M, 5)
    """
    E_star = np.broadcast_to(states.E_center[..., None], states.E_center.shape + (5,))
    node_integrals = integrals.nodes if integrals is not None else None
    U_star, failed = model.recover(E_star, geometry.nodes, node_integrals, states.reference[..., None])
    U_star = np.array(U_star, dtype=float)
    U_star[..., 2] = states.U_center
    failed = np.array(failed, dtype=bool)
    failed[..., 2] = False
    return U_star, failed


def source_increments(states: InterfaceStates, geometry: SweepGeometry,
                      integrals: Optional[RunningIntegrals], model: ModelSystem,
                      dx: float, options: SchemeOptions) -> Tuple[np.ndarray, int]:
    """
    Increment of R across every working cell.

    Well-balanced variants integrate the source of the reconstructed nodes
    minus that of the steady profile through the cell center, plus the flux
    difference of that profile across the cell; the increment then equals
    the flux difference exactly at steady states. The conservative variant
    integrates the source of the reconstructed nodes alone.

    Returns:
        (increments of shape (d, ..., M), number of recovery fallbacks)
    """
    quadrature = dx * (node_sources(states.U_nodes, geometry, model, dx) @ BOOLE)
    if not options.variant.well_balanced:
        return quadrature, 0

    U_star, failed = steady_profile_nodes(states, geometry, integrals, model)
    count = check_recovery(failed, options, 'steady profile')
    steady_quadrature = dx * (node_sources(U_star, geometry, model, dx) @ BOOLE)
    steady_flux = (model.flux(U_star[..., 4], geometry.nodes[..., 4])
                   - model.flux(U_star[..., 0], geometry.nodes[..., 0]))
    return quadrature - steady_quadrature + steady_flux, count


def interface_jumps(states: InterfaceStates, geometry: SweepGeometry, model: ModelSystem,
                    options: SchemeOptions) -> Tuple[np.ndarray, int]:
    """
    Increment of R across every interface, shape (d, ..., M-1).

    Well-balanced variants follow the steady path through the averaged
    equilibrium state; the conservative variant uses the linear path.
    """
    if not options.variant.well_balanced:
        jump = model.interface_jump_term(states.U_hat_minus, states.U_hat_plus,
                                         geometry.minus, geometry.plus)
        return jump, 0
    jump, failed = model.steady_path_jump(states.E_minus, states.E_plus, geometry.minus, geometry.plus,
                                          states.face_integral, states.reference[..., :-1],
                                          states.reference[..., 1:])
    return jump, check_recovery(failed, options, 'interface jump')


def global_source(states: InterfaceStates, geometry: SweepGeometry,
                  integrals: Optional[RunningIntegrals], model: ModelSystem,
                  dx: float, options: SchemeOptions) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    One-sided values R^- and R^+ at every interface.

    Returns:
        (R_minus, R_plus, number of recovery fallbacks)
    """
    jumps, failed = interface_jumps(states, geometry, model, options)

    if options.variant.well_balanced and model.integral_is_source:
        R_minus = model.source_from_integral(states.face_integral)
    else:
        increments, failed_cells = source_increments(states, geometry, integrals, model, dx, options)
        failed += failed_cells
        cell_part = np.cumsum(increments[..., :-1], axis=-1)
        jump_part = np.cumsum(jumps, axis=-1) - jumps
        R_minus = cell_part + jump_part
    return R_minus, R_minus + jumps, failed
