"""
Fifth-order affine-invariant WENO-Z interpolation of point values.
Interpolates five-point stencils f_{j-2}..f_{j+2} to x_j + s*dx for
s in {-1/2, -1/4, +1/4, +1/2}. All functions act on the last axis.
"""

from typing import Dict, Tuple, Union

import numpy as np

from src.errors import ConfigurationError, InputError


SUPPORTED_OFFSETS = (-0.5, -0.25, 0.25, 0.5)
EPSILON = 1e-12
POWER = 2
FLAT_TOLERANCE = 1e-14

# node positions (in units of dx, relative to x_j) of the three sub-stencils
_SUBSTENCIL_NODES = ((-2.0, -1.0, 0.0), (-1.0, 0.0, 1.0), (0.0, 1.0, 2.0))
_FULL_NODES = (-2.0, -1.0, 0.0, 1.0, 2.0)


def _lagrange_weights(nodes, s: float) -> np.ndarray:
    nodes = np.asarray(nodes, dtype=float)
    weights = np.ones(len(nodes))
    for i, xi in enumerate(nodes):
        for k, xk in enumerate(nodes):
            if k != i:
                weights[i] *= (s - xk) / (xi - xk)
    return weights


def _candidate_matrix(s: float) -> np.ndarray:
    """Rows: coefficients of the three quadratic candidates on the full stencil."""
    rows = np.zeros((3, 5))
    for i, nodes in enumerate(_SUBSTENCIL_NODES):
        rows[i, i:i + 3] = _lagrange_weights(nodes, s)
    return rows


def _solve_linear_weights(s: float) -> np.ndarray:
    """
    Moment-matching oracle: the combination of the candidates must reproduce
    the monomials x^3 and x^4 as the degree-4 interpolant does, and sum to one.
    """
    candidates = _candidate_matrix(s)
    x = np.asarray(_FULL_NODES)
    system = np.vstack([candidates @ x ** 3, candidates @ x ** 4, np.ones(3)])
    rhs = np.array([s ** 3, s ** 4, 1.0])
    return np.linalg.solve(system, rhs)


def _build_tables() -> Dict[float, Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    tables = {}
    for s in SUPPORTED_OFFSETS:
        gamma = _solve_linear_weights(s)
        candidates = _candidate_matrix(s)
        full = _lagrange_weights(_FULL_NODES, s)
        if not np.allclose(gamma @ candidates, full, rtol=0, atol=1e-14):
            raise ConfigurationError(f"Linear weights inconsistent at offset {s}")
        for table in (gamma, candidates, full):
            table.setflags(write=False)
        tables[s] = (gamma, candidates, full)
    return tables


_TABLES = _build_tables()


def _check_offset(s: float) -> float:
    s = float(s)
    if s not in _TABLES:
        raise ConfigurationError(f"Invalid offset: {s}. Must be one of {list(SUPPORTED_OFFSETS)}")
    return s


def linear_weights(s: float) -> Tuple[float, float, float]:
    """
    Linear (optimal) weights of the three sub-stencils at offset s.

    Raises:
        ConfigurationError: If s is not a supported offset
    """
    gamma = _TABLES[_check_offset(s)][0]
    return tuple(float(w) for w in gamma)


def degree4_weights(s: float) -> np.ndarray:
    """Weights of the degree-4 interpolant through all five points."""
    return _TABLES[_check_offset(s)][2]


def smoothness_indicators(stencils: np.ndarray) -> np.ndarray:
    """
    Jiang-Shu smoothness indicators of the three sub-stencils.

    Args:
        stencils: Array of shape (..., 5)

    Returns:
        Array of shape (..., 3) with beta_0, beta_1, beta_2
    """
    f = np.asarray(stencils, dtype=float)
    fm2, fm1, f0, fp1, fp2 = (f[..., k] for k in range(5))
    beta0 = 13.0 / 12.0 * (fm2 - 2 * fm1 + f0) ** 2 + 0.25 * (fm2 - 4 * fm1 + 3 * f0) ** 2
    beta1 = 13.0 / 12.0 * (fm1 - 2 * f0 + fp1) ** 2 + 0.25 * (fm1 - fp1) ** 2
    beta2 = 13.0 / 12.0 * (f0 - 2 * fp1 + fp2) ** 2 + 0.25 * (3 * f0 - 4 * fp1 + fp2) ** 2
    return np.stack([beta0, beta1, beta2], axis=-1)


def nonlinear_weights(normalized: np.ndarray, s: float) -> np.ndarray:
    """WENO-Z weights (power 2) computed on normalized stencils, shape (..., 3)."""
    gamma = _TABLES[_check_offset(s)][0]
    beta = smoothness_indicators(normalized)
    tau = np.abs(beta[..., 0] - beta[..., 2])[..., None]
    raw = gamma * (1.0 + (tau / (beta + EPSILON)) ** POWER)
    return raw / raw.sum(axis=-1, keepdims=True)


def interpolate(stencils: np.ndarray, s: float, mode: str = 'weno') -> np.ndarray:
    """
    Interpolate five-point stencils to the offset s.

    Args:
        stencils: Array of shape (..., 5); a plain 5-vector is accepted
        s: Offset in units of dx, one of SUPPORTED_OFFSETS
        mode: 'weno' for Ai-WENO-Z, 'linear' for the degree-4 interpolant

    Returns:
        Interpolated values, shape (...)

    Raises:
        ConfigurationError: On unsupported offsets or modes
        InputError: On NaN/Inf input
    """
    s = _check_offset(s)
    f = np.asarray(stencils, dtype=float)
    if f.shape[-1] != 5:
        raise ConfigurationError(f"Stencils must have 5 entries on the last axis, got {f.shape}")
    if not np.all(np.isfinite(f)):
        raise InputError("Non-finite values in interpolation stencil")

    gamma, candidates, full = _TABLES[s]
    linear = f @ full
    if mode == 'linear':
        return linear
    if mode != 'weno':
        raise ConfigurationError(f"Invalid interpolation mode: {mode}. Must be 'weno' or 'linear'")

    mu = f.mean(axis=-1)
    sigma = np.abs(f - mu[..., None]).max(axis=-1)
    flat = sigma <= FLAT_TOLERANCE * (1.0 + np.abs(mu))
    scale = np.where(flat, 1.0, sigma)
    z = (f - mu[..., None]) / scale[..., None]

    weights = nonlinear_weights(z, s)
    candidate_values = z @ candidates.T
    result = mu + scale * np.sum(weights * candidate_values, axis=-1)
    return np.where(flat, linear, result)


def interpolate_offsets(stencils: np.ndarray, offsets, mode: str = 'weno') -> np.ndarray:
    """Interpolate to several offsets at once; output gains a trailing axis."""
    return np.stack([interpolate(stencils, s, mode) for s in offsets], axis=-1)


def stencil_view(values: np.ndarray, start: int = 2, stop: Union[int, None] = None) -> np.ndarray:
    """
    Five-point stencils of every cell in [start, stop) along the last axis.

    Returns:
        Array of shape (..., stop - start, 5)
    """
    n = values.shape[-1]
    stop = n - 2 if stop is None else stop
    windows = np.lib.stride_tricks.sliding_window_view(values, 5, axis=-1)
    return windows[..., start - 2:stop - 2, :]
