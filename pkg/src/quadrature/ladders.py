"""
Recursive fifth-order running integrals of pointwise source integrands.

Integrals are anchored at x_{-5/2} and evaluated at cell centers, cell
interfaces and quarter points. "Working cells" are the extended cells with
a full five-point stencil: labels j = -2..N+3, extended indices 2..n-3.
"""

from dataclasses import dataclass

import numpy as np

from src.interpolation.aiweno import interpolate_offsets, stencil_view


BOOLE = np.array([7.0, 32.0, 12.0, 32.0, 7.0]) / 90.0
SEED = np.array([29.0, 124.0, 24.0, 4.0, -1.0]) / 360.0

# sub-interval rules of the quartic through five equispaced nodes t0..t4,
# in units of the node spacing
INTERVAL_01 = np.array([251.0, 646.0, -264.0, 106.0, -19.0]) / 720.0
INTERVAL_12 = np.array([-19.0, 346.0, 456.0, -74.0, 11.0]) / 720.0
INTERVAL_23 = INTERVAL_12[::-1].copy()
INTERVAL_34 = INTERVAL_01[::-1].copy()

# nodal derivative of the same quartic, in units of 1/spacing
NODAL_DERIVATIVE = np.array([
    [-25.0, 48.0, -36.0, 16.0, -3.0],
    [-3.0, -10.0, 18.0, -6.0, 1.0],
    [1.0, -8.0, 0.0, 8.0, -1.0],
    [-1.0, 6.0, -18.0, 10.0, 3.0],
    [3.0, -16.0, 36.0, -48.0, 25.0],
]) / 12.0

NODE_OFFSETS = (-0.5, -0.25, 0.0, 0.25, 0.5)

for _table in (BOOLE, SEED, INTERVAL_01, INTERVAL_12, INTERVAL_23, INTERVAL_34, NODAL_DERIVATIVE):
    _table.setflags(write=False)


def seed_integral(samples: np.ndarray, dx: float) -> np.ndarray:
    """
    Integral over [x_{-5/2}, x_{-2}].

    Args:
        samples: (..., 5) values f+_{-5/2}, f_{-9/4}, f_{-2}, f_{-7/4}, f-_{-3/2}
        dx: Cell width
    """
    return dx * (np.asarray(samples, dtype=float) @ SEED)


def advance_center(previous: np.ndarray, samples: np.ndarray, dx: float) -> np.ndarray:
    """I_j from I_{j-1} and f_{j-1}, f_{j-3/4}, f_{j-1/2}, f_{j-1/4}, f_j (Boole's rule)."""
    return previous + dx * (np.asarray(samples, dtype=float) @ BOOLE)


def advance_interface(previous: np.ndarray, samples: np.ndarray, dx: float) -> np.ndarray:
    """I_{j+1/2} from I_{j-1/2} and f+_{j-1/2}, f_{j-1/4}, f_j, f_{j+1/4}, f-_{j+1/2}."""
    return previous + dx * (np.asarray(samples, dtype=float) @ BOOLE)


def nodal_derivative(values: np.ndarray, spacing: float) -> np.ndarray:
    """Derivatives at five equispaced nodes (last axis) of the quartic through them."""
    return np.asarray(values, dtype=float) @ NODAL_DERIVATIVE.T / spacing


def sample_integrand(f_extended: np.ndarray, mode: str = 'weno') -> np.ndarray:
    """
    Node values of an integrand on every working cell.

    Returns:
        Array of shape (..., n-4, 5): f+_{j-1/2}, f_{j-1/4}, f_j, f_{j+1/4}, f-_{j+1/2}
    """
    stencils = stencil_view(f_extended)
    nodes = interpolate_offsets(stencils, (-0.5, -0.25, 0.25, 0.5), mode)
    center = f_extended[..., 2:-2]
    return np.concatenate([nodes[..., :2], center[..., None], nodes[..., 2:]], axis=-1)


@dataclass(frozen=True)
class RunningIntegrals:
    """
    Attributes:
        center: I_j on every extended cell, shape (..., n)
        faces: I_{j+1/2} from x_{-5/2} (index 0) to x_{N+7/2}, shape (..., n-3)
        quarter: I_{j-1/4}, I_{j+1/4} on the working cells, shape (..., n-4, 2)
    """

    center: np.ndarray
    faces: np.ndarray
    quarter: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        """I at the five nodes of every working cell, shape (..., n-4, 5)."""
        return np.stack([
            self.faces[..., :-1],
            self.quarter[..., 0],
            self.center[..., 2:-2],
            self.quarter[..., 1],
            self.faces[..., 1:],
        ], axis=-1)

    @classmethod
    def zeros(cls, shape) -> 'RunningIntegrals':
        shape = tuple(shape)
        n = shape[-1]
        lead = shape[:-1]
        return cls(np.zeros(shape), np.zeros(lead + (n - 3,)), np.zeros(lead + (n - 4, 2)))


def running_integrals(f_extended: np.ndarray, dx: float, mode: str = 'weno') -> RunningIntegrals:
    """
    All running integrals of f along the last axis.

    Args:
        f_extended: Integrand at extended cell centers, shape (..., n)
        dx: Cell width
        mode: Interpolation mode for the quarter and half point values

    Returns:
        RunningIntegrals anchored at x_{-5/2}
    """
    f = np.asarray(f_extended, dtype=float)
    nodes = sample_integrand(f, mode)

    # center ladder: seed on the first working cell, Boole steps afterwards
    seed = seed_integral(nodes[..., 0, :], dx)
    steps = np.stack([
        nodes[..., :-1, 2],
        nodes[..., :-1, 3],
        0.5 * (nodes[..., :-1, 4] + nodes[..., 1:, 0]),
        nodes[..., 1:, 1],
        nodes[..., 1:, 2],
    ], axis=-1)
    increments = advance_center(0.0, steps, dx)
    working = np.concatenate([seed[..., None], seed[..., None] + np.cumsum(increments, axis=-1)], axis=-1)

    # outer ghost cells from one-sided quartic rules on center samples
    left = f[..., :5]
    right = f[..., -5:]
    i1 = working[..., 0] - dx * (left @ INTERVAL_12)
    i0 = i1 - dx * (left @ INTERVAL_01)
    i_r1 = working[..., -1] + dx * (right @ INTERVAL_23)
    i_r2 = i_r1 + dx * (right @ INTERVAL_34)
    center = np.concatenate([i0[..., None], i1[..., None], working,
                             i_r1[..., None], i_r2[..., None]], axis=-1)

    face_steps = advance_interface(0.0, nodes, dx)
    faces = np.concatenate([np.zeros(face_steps.shape[:-1] + (1,)),
                            np.cumsum(face_steps, axis=-1)], axis=-1)

    quarter_left = working - dx * (nodes @ (INTERVAL_12 / 4.0))
    quarter_right = working + dx * (nodes @ (INTERVAL_23 / 4.0))
    quarter = np.stack([quarter_left, quarter_right], axis=-1)
    return RunningIntegrals(center, faces, quarter)
