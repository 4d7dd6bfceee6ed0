"""
Local characteristic decomposition.
Real eigen-decompositions of frozen matrices and the projection of
five-point stencils onto (and back from) the characteristic fields.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.errors import HyperbolicityLost, InputError, NumericalError


logger = logging.getLogger(__name__)

IMAGINARY_TOLERANCE = 1e-8


@dataclass(frozen=True)
class CharBasis:
    """
    Right eigenvectors Q, their inverse and the eigenvalues.

    Batched bases carry leading axes: Q has shape (..., d, d).
    """

    Q: np.ndarray
    Q_inv: np.ndarray
    eigenvalues: np.ndarray

    @classmethod
    def identity(cls, d: int, batch_shape: Tuple[int, ...] = ()) -> 'CharBasis':
        eye = np.broadcast_to(np.eye(d), batch_shape + (d, d)).copy()
        return cls(eye, eye.copy(), np.zeros(batch_shape + (d,)))


def _complex_mask(eigenvalues: np.ndarray) -> np.ndarray:
    radius = np.abs(eigenvalues).max(axis=-1)
    return np.abs(eigenvalues.imag).max(axis=-1) > IMAGINARY_TOLERANCE * (1.0 + radius)


def _sorted_real_basis(eigenvalues: np.ndarray, vectors: np.ndarray):
    order = np.argsort(eigenvalues.real, axis=-1)
    lam = np.take_along_axis(eigenvalues.real, order, axis=-1)
    Q = np.take_along_axis(vectors.real, order[..., None, :], axis=-1)
    scale = np.abs(Q).max(axis=-2, keepdims=True)
    Q = Q / np.where(scale > 0, scale, 1.0)
    return lam, Q


def eigendecompose(C: np.ndarray) -> CharBasis:
    """
    Real eigen-decomposition of a single d x d matrix.

    Eigenvalues are sorted ascending and eigenvector columns scaled to unit
    max-norm.

    Raises:
        InputError: If C is not finite
        HyperbolicityLost: If C has a complex pair beyond tolerance
        NumericalError: If the eigen solver does not converge
    """
    C = np.asarray(C, dtype=float)
    if not np.all(np.isfinite(C)):
        raise InputError("Non-finite matrix passed to eigendecompose")
    try:
        eigenvalues, vectors = np.linalg.eig(C)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Eigen decomposition failed: {str(e)}")

    if _complex_mask(eigenvalues):
        raise HyperbolicityLost(f"Complex eigenvalues {eigenvalues}")

    lam, Q = _sorted_real_basis(eigenvalues, vectors)
    try:
        Q_inv = np.linalg.inv(Q)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Eigenvector matrix is singular: {str(e)}")
    return CharBasis(Q, Q_inv, lam)


def eigendecompose_batch(C: np.ndarray) -> Tuple[CharBasis, np.ndarray]:
    """
    Eigen-decompose a stack of matrices of shape (..., d, d).

    Entries with complex spectra, singular eigenvector matrices or
    non-finite data fall back to the identity basis.

    Returns:
        (basis, lost) where lost flags the entries that fell back
    """
    C = np.asarray(C, dtype=float)
    d = C.shape[-1]
    batch = C.shape[:-2]
    finite = np.all(np.isfinite(C), axis=(-2, -1))
    safe = np.where(finite[..., None, None], C, np.eye(d))

    eigenvalues, vectors = np.linalg.eig(safe)
    lost = _complex_mask(eigenvalues) | ~finite
    lam, Q = _sorted_real_basis(eigenvalues, vectors)

    cond = np.linalg.cond(Q)
    lost |= ~np.isfinite(cond) | (cond > 1e12)
    eye = np.broadcast_to(np.eye(d), batch + (d, d))
    Q = np.where(lost[..., None, None], eye, Q)
    lam = np.where(lost[..., None], 0.0, lam)
    Q_inv = np.linalg.inv(Q)
    return CharBasis(Q, Q_inv, lam), lost


def basis_from_matrices(Q: np.ndarray, Q_inv: Optional[np.ndarray] = None,
                        eigenvalues: Optional[np.ndarray] = None) -> CharBasis:
    """Wrap analytic eigenvector matrices into a CharBasis."""
    Q = np.asarray(Q, dtype=float)
    Q_inv = np.linalg.inv(Q) if Q_inv is None else np.asarray(Q_inv, dtype=float)
    if eigenvalues is None:
        eigenvalues = np.full(Q.shape[:-1], np.nan)
    return CharBasis(Q, Q_inv, eigenvalues)


def to_characteristic(basis: CharBasis, e_stencil: np.ndarray) -> np.ndarray:
    """
    Project stencils onto characteristic fields: Gamma_l = Q_inv E_l.

    Args:
        basis: Basis with Q_inv of shape (..., d, d)
        e_stencil: Stencils of shape (d, ..., 5)

    Returns:
        Characteristic stencils, shape (d, ..., 5)
    """
    return np.einsum('...ik,k...l->i...l', basis.Q_inv, e_stencil)


def from_characteristic(basis: CharBasis, gamma_minus: np.ndarray,
                        gamma_plus: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Map interpolated characteristic values back: E = Q Gamma.

    Args:
        gamma_minus: Values at x_{j-1/2} seen from cell j, shape (d, ...)
        gamma_plus: Values at x_{j+1/2} seen from cell j, shape (d, ...)

    Returns:
        (E^+_{j-1/2}, E^-_{j+1/2})
    """
    return to_physical(basis, gamma_minus), to_physical(basis, gamma_plus)


def to_physical(basis: CharBasis, gamma: np.ndarray) -> np.ndarray:
    """Apply Q to characteristic values of shape (d, ...) or (d, ..., k)."""
    if gamma.ndim == basis.Q.ndim - 1:
        return np.einsum('...ik,k...->i...', basis.Q, gamma)
    return np.einsum('...ik,k...l->i...l', basis.Q, gamma)
