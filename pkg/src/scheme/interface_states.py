"""
Point values at cell interfaces and quarter points.

Cells with a full five-point stencil ("working cells", extended indices
2..n-3) are reconstructed. Node k = 0..4 of a working cell sits at
x_j + (k - 2) dx / 4, so node 0 is x_{j-1/2} and node 4 is x_{j+1/2}.
Interfaces are numbered f = 0..M-2 between working cells f and f+1.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.characteristics.lcd import CharBasis, eigendecompose_batch, to_characteristic, to_physical
from src.errors import RecoveryError
from src.interpolation.aiweno import interpolate_offsets, stencil_view
from src.mesh.geometry import Geometry
from src.quadrature.ladders import RunningIntegrals
from src.scheme.variants import SchemeOptions, SchemeVariant
from src.systems.base import ModelSystem


logger = logging.getLogger(__name__)

QUARTER_OFFSETS = (-0.5, -0.25, 0.25, 0.5)


@dataclass(frozen=True)
class SweepGeometry:
    """
    Geometry of one sweep with its node values, computed once per run.

    Attributes:
        values: Extended cell values, shape (..., n)
        slopes: Extended cell slopes, shape (..., n)
        nodes: Node values on the working cells, shape (..., n-4, 5)
        slope_nodes: Node slopes on the working cells, shape (..., n-4, 5)
    """

    values: np.ndarray
    slopes: np.ndarray
    nodes: np.ndarray
    slope_nodes: np.ndarray

    @classmethod
    def from_geometry(cls, geometry: Geometry, reconstruction: str = 'weno') -> 'SweepGeometry':
        values = np.asarray(geometry.values, dtype=float)
        slopes = np.asarray(geometry.slopes, dtype=float)
        return cls(values, slopes,
                   characteristic_nodes(values, None, reconstruction),
                   characteristic_nodes(slopes, None, reconstruction))

    @property
    def working(self) -> np.ndarray:
        return self.values[..., 2:-2]

    @property
    def minus(self) -> np.ndarray:
        """Geometry at interface f seen from the left cell."""
        return self.nodes[..., :-1, 4]

    @property
    def plus(self) -> np.ndarray:
        return self.nodes[..., 1:, 0]

    @property
    def mean(self) -> np.ndarray:
        return 0.5 * (self.minus + self.plus)

    def rows(self, block: slice) -> 'SweepGeometry':
        """Restriction to a block of sweep lines (first axis)."""
        return SweepGeometry(self.values[block], self.slopes[block],
                             self.nodes[block], self.slope_nodes[block])


@dataclass
class InterfaceStates:
    """
    Reconstructed states of one sweep.

    Attributes:
        U_center: Working-cell states, shape (d, ..., M)
        E_center: Working-cell equilibrium variables (None for Scheme 3)
        reference: branch_reference() of the working cells
        U_nodes: States at the five nodes of every working cell, (d, ..., M, 5)
        E_nodes: Equilibrium variables at the nodes (None for Scheme 3)
        U_minus, U_plus: States left/right of each interface, (d, ..., M-1)
        U_hat_minus, U_hat_plus: Same, recovered with averaged geometry
        E_minus, E_plus: Equilibrium variables left/right of each interface
        face_integral: Running integral at each interface (None if unused)
        lost: Cells whose characteristic basis fell back to identity
        failed: Entries whose recovery used a fallback
    """

    U_center: np.ndarray
    E_center: Optional[np.ndarray]
    reference: np.ndarray
    U_nodes: np.ndarray
    E_nodes: Optional[np.ndarray]
    U_minus: np.ndarray
    U_plus: np.ndarray
    U_hat_minus: np.ndarray
    U_hat_plus: np.ndarray
    E_minus: Optional[np.ndarray]
    E_plus: Optional[np.ndarray]
    face_integral: Optional[np.ndarray]
    lost: int = 0
    failed: int = 0


def select_basis(U_working: np.ndarray, geo_working: np.ndarray, model: ModelSystem,
                 variant: SchemeVariant) -> Tuple[Optional[CharBasis], np.ndarray]:
    """Characteristic basis of each working cell for the given variant (None = identity)."""
    if variant == SchemeVariant.PLAIN_EQUILIBRIUM:
        return None, np.zeros(U_working.shape[1:], dtype=bool)
    if variant == SchemeVariant.LCD_EQUILIBRIUM:
        return model.characteristic_basis(U_working, geo_working)
    return eigendecompose_batch(model.quasilinear_matrix(U_working, geo_working))


def characteristic_nodes(field: np.ndarray, basis: Optional[CharBasis],
                         reconstruction: str) -> np.ndarray:
    """
    Node values of a (d, ..., n) field interpolated in characteristic variables.

    Returns:
        Array of shape (d, ..., n-4, 5)
    """
    center = field[..., 2:-2]
    if reconstruction == 'constant':
        return np.repeat(center[..., None], 5, axis=-1)
    stencils = stencil_view(field)
    if basis is not None:
        stencils = to_characteristic(basis, stencils)
    quarter = interpolate_offsets(stencils, QUARTER_OFFSETS, reconstruction)
    if basis is not None:
        quarter = to_physical(basis, quarter)
    return np.concatenate([quarter[..., :2], center[..., None], quarter[..., 2:]], axis=-1)


def check_recovery(failed: np.ndarray, options: SchemeOptions, stage: str) -> int:
    count = int(np.count_nonzero(failed))
    if count and options.strict_recovery:
        raise RecoveryError("Equilibrium recovery fell back", cells=np.flatnonzero(failed).tolist(), stage=stage)
    return count


def build_interface_states(U_ext: np.ndarray, geometry: SweepGeometry,
                           integrals: Optional[RunningIntegrals], model: ModelSystem,
                           options: SchemeOptions) -> InterfaceStates:
    """
    Reconstruct interface and quarter-point states of one sweep.

    Equilibrium variants interpolate E (in the variant's characteristic
    basis) and recover U at every node; U-hat uses the interface-averaged
    geometry. The conservative variant interpolates U through the
    eigenvectors of dF/dU - B and sets U-hat = U.

    Args:
        U_ext: Ghost-filled states, shape (d, ..., n)
        geometry: Sweep geometry with node values
        integrals: Running integrals of the equilibrium integrand (or None)
        model: Physical model
        options: Scheme options

    Raises:
        RecoveryError: On recovery fallbacks when options.strict_recovery is set
    """
    variant = options.variant
    reconstruction = options.reconstruction
    U_center = U_ext[..., 2:-2]
    geo_center = geometry.working
    reference = model.branch_reference(U_center, geo_center)
    basis, lost = select_basis(U_center, geo_center, model, variant)
    lost_count = int(np.count_nonzero(lost))

    if variant == SchemeVariant.LCD_CONSERVATIVE:
        U_nodes = characteristic_nodes(U_ext, basis, reconstruction)
        U_minus, U_plus = U_nodes[..., :-1, 4], U_nodes[..., 1:, 0]
        return InterfaceStates(U_center, None, reference, U_nodes, None,
                               U_minus, U_plus, U_minus, U_plus, None, None, None,
                               lost=lost_count)

    center_integral = integrals.center if integrals is not None else None
    E_ext = model.equilibrium(U_ext, geometry.values, center_integral)
    E_nodes = characteristic_nodes(E_ext, basis, reconstruction)

    node_integrals = integrals.nodes if integrals is not None else None
    U_nodes, failed = model.recover(E_nodes, geometry.nodes, node_integrals, reference[..., None])
    U_nodes = np.array(U_nodes, dtype=float)
    U_nodes[..., 2] = U_center
    failed = np.array(failed, dtype=bool)
    failed[..., 2] = False

    face_integral = integrals.faces[..., 1:-1] if integrals is not None else None
    E_minus, E_plus = E_nodes[..., :-1, 4], E_nodes[..., 1:, 0]
    U_hat_minus, failed_minus = model.recover(E_minus, geometry.mean, face_integral, reference[..., :-1])
    U_hat_plus, failed_plus = model.recover(E_plus, geometry.mean, face_integral, reference[..., 1:])

    failed_count = check_recovery(failed, options, 'interface states')
    failed_count += check_recovery(failed_minus | failed_plus, options, 'hatted interface states')

    return InterfaceStates(
        U_center=U_center,
        E_center=E_ext[..., 2:-2],
        reference=reference,
        U_nodes=U_nodes,
        E_nodes=E_nodes,
        U_minus=U_nodes[..., :-1, 4],
        U_plus=U_nodes[..., 1:, 0],
        U_hat_minus=U_hat_minus,
        U_hat_plus=U_hat_plus,
        E_minus=E_minus,
        E_plus=E_plus,
        face_integral=face_integral,
        lost=lost_count,
        failed=failed_count,
    )
