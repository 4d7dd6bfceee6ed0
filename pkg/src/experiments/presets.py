"""
Preset problems: the eight benchmark examples and the smooth convergence presets.

Every preset fixes the domain, default mesh, physical constants, boundary
rules, initial data and final time. Constants can be overridden by keyword.
"""

from dataclasses import dataclass, replace
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from src.errors import ConfigurationError
from src.mesh.boundary import BoundaryCondition, BoundaryKind, ComponentRule
from src.mesh.geometry import Geometry, Geometry2D
from src.mesh.grid import GridSpec1D, GridSpec2D
from src.scheme.rhs import SemiDiscretization1D, SemiDiscretization2D
from src.scheme.variants import SchemeOptions
from src.systems import (
    EulerGravity1D, EulerGravitySweep, LinearAdvection, ModelSystem, NozzleFlow,
    SaintVenant, TwoLayerShallowWater,
)
from src.experiments.steady import (
    hydrostatic_steady_state, nozzle_steady_state, two_layer_steady_state,
)


Grid = Union[GridSpec1D, GridSpec2D]

# Example 1 / 2 nozzle data
NOZZLE_DISCHARGE = 8.0
DIVERGENT_ENERGY = 21.9230562619897
CONVERGENT_ENERGY = 58.3367745090349

# Example 4 inflow/outflow data
HUMP_DISCHARGE = 4.42
HUMP_OUTFLOW_DEPTH = 2.0
HUMP_SETTLE_TIME = 500.0

# Example 5 steady state, left and right of x = 0
TWO_LAYER_LEFT = (1.22373355048230, 12.0, 0.968329515483846, 10.0)
TWO_LAYER_RIGHT_DEPTHS = (1.44970064153589, 1.12439026921484)

HYDROSTATIC_COEFFICIENT = 1.21


@dataclass
class ProblemSetup:
    """
    Everything needed to run one problem.

    Attributes:
        name: Problem identifier used in file names
        initial: Interior initial state, (d, N) or (d, ny, nx)
        steady: Interior steady state the output is compared against
        reference: Extended steady state used by Free boundaries
        settle_time: If set, the steady state is first computed by running
            the scheme from `initial` for this long (each scheme has its own
            discrete equilibrium) and `perturb` then builds the initial data
        perturb: Maps a steady interior state to the perturbed initial state
        settle_discharge: Discharge the settled state should carry everywhere
        schemes: Scheme variants compared by default
        metric_field: Field the metrics are computed on
    """

    name: str
    title: str
    model: ModelSystem
    grid: Grid
    geometry: Union[Geometry, Geometry2D]
    bc: BoundaryCondition
    initial: np.ndarray
    t_final: float
    metric_field: str
    schemes: Tuple[str, ...] = ('1', '2', '3')
    steady: Optional[np.ndarray] = None
    reference: Optional[np.ndarray] = None
    settle_time: Optional[float] = None
    perturb: Optional[Callable[[np.ndarray], np.ndarray]] = None
    settle_discharge: Optional[float] = None

    @property
    def dimension(self) -> int:
        return 2 if isinstance(self.grid, GridSpec2D) else 1

    @property
    def dx(self) -> float:
        return self.grid.x.dx if self.dimension == 2 else self.grid.dx

    @property
    def interior_geometry(self) -> np.ndarray:
        g = self.grid.ghost_width
        if self.dimension == 2:
            ny, nx = self.grid.shape
            return self.geometry.values[g:g + ny, g:g + nx]
        return self.geometry.values[self.grid.interior]

    def discretization(self, options: SchemeOptions, threads: Optional[int] = None):
        if self.dimension == 2:
            return SemiDiscretization2D(self.model, self.grid, self.geometry, self.bc,
                                        options, self.reference, threads)
        return SemiDiscretization1D(self.model, self.grid, self.geometry, self.bc,
                                    options, self.reference)

    def with_boundary(self, kind: BoundaryKind) -> 'ProblemSetup':
        """Copy with one boundary kind on every side and component."""
        return replace(self, bc=uniform_boundary(self.model, kind, self.dimension))

    def with_component_rule(self, side: str, component: str, kind: BoundaryKind,
                            value: Optional[float] = None) -> 'ProblemSetup':
        """
        Copy with the rule of one named component replaced on one side.

        Reflecting rules flip the momentum normal to that side.

        Raises:
            ConfigurationError: On an unknown component or a y-side in 1-D
        """
        names = self.model.component_names
        if component not in names:
            raise ConfigurationError(f"Invalid component: {component}. Must be one of {list(names)}")
        if self.dimension == 1 and side in ('bottom', 'top'):
            raise ConfigurationError(f"Side '{side}' needs a 2-D problem")
        index = names.index(component)
        axis = 'y' if side in ('bottom', 'top') else 'x'
        rule = ComponentRule(kind, value, odd=index in _odd_components(self.model, axis))
        return replace(self, bc=self.bc.with_rule(side, index, rule))


def _interior(grid: GridSpec1D, extended: np.ndarray) -> np.ndarray:
    return extended[..., grid.interior]


def _indicator(x: np.ndarray, lower: float, upper: float) -> np.ndarray:
    return ((x >= lower) & (x <= upper)).astype(float)


def _step(value_left: float, value_right: float, at: float = 0.0):
    return lambda x: np.where(x < at, value_left, value_right)


def _zero_slope(x: np.ndarray) -> np.ndarray:
    return np.zeros_like(x)


def _cells(length: float, nx: Optional[int], default_dx: float) -> int:
    return int(nx) if nx is not None else int(round(length / default_dx))


def _odd_components(model: ModelSystem, axis: str = 'x') -> Tuple[int, ...]:
    """Momentum components normal to a wall of the given axis."""
    normal = {'x': ('q', 'q1', 'q2', 'm'), 'y': ('n',)}[axis]
    return tuple(i for i, name in enumerate(model.component_names) if name in normal)


def uniform_boundary(model: ModelSystem, kind: BoundaryKind, dimension: int = 1) -> BoundaryCondition:
    """
    Raises:
        ConfigurationError: For FIXED_VALUE, which needs per-component values
    """
    kind = BoundaryKind.parse(kind)
    d = model.n_components
    if kind == BoundaryKind.FREE:
        return BoundaryCondition.free(d)
    if kind == BoundaryKind.PERIODIC:
        return BoundaryCondition.periodic(d)
    if kind == BoundaryKind.REFLECTING:
        odd_y = _odd_components(model, 'y') if dimension == 2 else None
        return BoundaryCondition.reflecting(d, _odd_components(model, 'x'), odd_y)
    raise ConfigurationError(f"Boundary kind {kind.value} needs per-component values in a preset")


def _nozzle(name: str, title: str, sign: float, energy: float, bump: float, t_final: float,
            nx: Optional[int], branch: str = 'supersonic', schemes: Tuple[str, ...] = ('1', '2', '3'),
            **constants) -> ProblemSetup:
    model = NozzleFlow(**constants)
    grid = GridSpec1D(0.0, 10.0, _cells(10.0, nx, 1.0 / 20.0))

    def sigma(x):
        return 0.976 + sign * 0.748 * np.tanh(0.8 * x - 4.0)

    def sigma_x(x):
        return sign * 0.748 * 0.8 / np.cosh(0.8 * x - 4.0) ** 2

    geometry = Geometry.from_function(grid, sigma, sigma_x)
    reference = nozzle_steady_state(model, geometry.values, NOZZLE_DISCHARGE, energy, branch)
    steady = _interior(grid, reference)
    sigma_in = _interior(grid, geometry.values)
    rho_eq = steady[0] / sigma_in
    u_eq = steady[1] / steady[0]
    rho = rho_eq + bump * _indicator(grid.centers(), 0.5, 1.5)
    initial = np.stack([sigma_in * rho, sigma_in * rho * u_eq])
    return ProblemSetup(name, title, model, grid, geometry, BoundaryCondition.free(2), initial,
                        t_final, 'rho', schemes=schemes, steady=steady, reference=reference)


def divergent_nozzle(nx: Optional[int] = None, **constants) -> ProblemSetup:
    return _nozzle('example1', 'Small perturbation of a divergent nozzle flow', 1.0,
                   DIVERGENT_ENERGY, 1e-2, 0.8, nx, **constants)


def convergent_nozzle(nx: Optional[int] = None, **constants) -> ProblemSetup:
    return _nozzle('example2', 'Large perturbation of a convergent nozzle flow', -1.0,
                   CONVERGENT_ENERGY, 0.3, 0.5, nx, schemes=('1', '2', '3', 'A'), **constants)


def friction_riemann(nx: Optional[int] = None, manning: float = 0.4, **constants) -> ProblemSetup:
    model = SaintVenant(manning=manning, **constants)
    grid = GridSpec1D(-0.1, 0.3, _cells(0.4, nx, 1.0 / 250.0))
    geometry = Geometry.from_function(grid, _step(1.0, 1.9), _zero_slope)
    x = grid.centers()
    h = np.where(x < 0.0, 1.0, 0.8)
    u = np.where(x < 0.0, 2.0, 4.0)
    return ProblemSetup('example3', 'Riemann problem over a bottom step with friction', model, grid,
                        geometry, BoundaryCondition.free(2), np.stack([h, h * u]), 0.03, 'h')


def flow_over_hump(nx: Optional[int] = None, manning: float = 0.15, **constants) -> ProblemSetup:
    model = SaintVenant(manning=manning, **constants)
    grid = GridSpec1D(0.0, 25.0, _cells(25.0, nx, 0.25))
    geometry = Geometry.from_function(grid, lambda x: 0.2 * _indicator(x, 8.0, 12.0), _zero_slope)
    bc = (BoundaryCondition.free(2)
          .with_rule('left', 1, ComponentRule(BoundaryKind.FIXED_VALUE, HUMP_DISCHARGE))
          .with_rule('right', 0, ComponentRule(BoundaryKind.FIXED_VALUE, HUMP_OUTFLOW_DEPTH)))
    h = HUMP_OUTFLOW_DEPTH - _interior(grid, geometry.values)
    initial = np.stack([h, np.zeros_like(h)])
    bump = 1e-4 * _indicator(grid.centers(), 9.5, 10.5)

    def perturb(steady: np.ndarray) -> np.ndarray:
        return np.stack([steady[0] + bump, steady[1]])

    return ProblemSetup('example4', 'Perturbed moving-water equilibrium over a hump', model, grid,
                        geometry, bc, initial, 1.5, 'h', schemes=('1', '2', '3', 'A'),
                        settle_time=HUMP_SETTLE_TIME, perturb=perturb, settle_discharge=HUMP_DISCHARGE)


def two_layer_steady(nx: Optional[int] = None, **constants) -> ProblemSetup:
    model = TwoLayerShallowWater(**constants)
    grid = GridSpec1D(-1.0, 1.0, _cells(2.0, nx, 1.0 / 100.0))
    geometry = Geometry.from_function(grid, _step(-2.0, -1.0), _zero_slope)
    x = grid.extended_centers()
    guess = np.stack([np.where(x < 0.0, TWO_LAYER_LEFT[0], TWO_LAYER_RIGHT_DEPTHS[0]),
                      np.where(x < 0.0, TWO_LAYER_LEFT[2], TWO_LAYER_RIGHT_DEPTHS[1])])
    reference = two_layer_steady_state(model, geometry.values, np.array(TWO_LAYER_LEFT), guess)
    steady = _interior(grid, reference)
    initial = steady.copy()
    initial[0] += 0.12 * _indicator(grid.centers(), -0.9, -0.8)
    return ProblemSetup('example5', 'Perturbed discontinuous two-layer steady state', model, grid,
                        geometry, BoundaryCondition.free(4), initial, 0.08, 'h1',
                        schemes=('1', '2', '3', 'A'), steady=steady, reference=reference)


def two_layer_riemann(nx: Optional[int] = None, **constants) -> ProblemSetup:
    model = TwoLayerShallowWater(**constants)
    grid = GridSpec1D(-1.0, 1.0, _cells(2.0, nx, 1.0 / 50.0))
    geometry = Geometry.from_function(grid, _step(-2.0, -1.5), _zero_slope)
    left = np.array([1.0, 1.5, 1.0, 1.0])
    right = np.array([0.8, 1.2, 1.2, 1.8])
    initial = np.where(grid.centers() < 0.0, left[:, None], right[:, None])
    return ProblemSetup('example6', 'Two-layer Riemann problem over a bottom step', model, grid,
                        geometry, BoundaryCondition.free(4), initial, 0.1, 'h1')


def gravity_shock_tube(nx: Optional[int] = None, **constants) -> ProblemSetup:
    model = EulerGravity1D(**constants)
    grid = GridSpec1D(0.0, 1.0, _cells(1.0, nx, 1.0 / 50.0))
    geometry = Geometry.from_function(grid, lambda x: x, np.ones_like)
    x = grid.centers()
    rho = np.where(x <= 0.5, 1.0, 0.125)
    p = np.where(x <= 0.5, 1.0, 0.1)
    energy = p / (model.gamma - 1.0) + rho * x
    initial = np.stack([rho, np.zeros_like(rho), energy])
    bc = BoundaryCondition.reflecting(3, _odd_components(model))
    return ProblemSetup('example7', 'Shock tube under gravitation', model, grid, geometry, bc,
                        initial, 0.2, 'rho', schemes=('1', '2'))


def hydrostatic_perturbation(nx: Optional[int] = None, amplitude: float = 0.5,
                             mode: str = 'weno', **constants) -> ProblemSetup:
    """
    2-D hydrostatic state with a pressure bump of the given amplitude in the
    disk x^2 + y^2 <= 0.15^2 (amplitude 0 leaves the steady state unperturbed).
    """
    model = EulerGravitySweep(**constants)
    grid = GridSpec2D.square(0.0, 1.0, _cells(1.0, nx, 1.0 / 80.0))
    geometry = Geometry2D.from_function(grid, lambda X, Y: X + Y,
                                        lambda X, Y: (np.ones_like(X), np.ones_like(Y)))
    reference = hydrostatic_steady_state(model, grid, HYDROSTATIC_COEFFICIENT, mode)
    g = grid.ghost_width
    ny, nx_cells = grid.shape
    steady = reference[:, g:g + ny, g:g + nx_cells].copy()
    X, Y = grid.centers()
    initial = steady.copy()
    initial[3] += amplitude * (X ** 2 + Y ** 2 <= 0.15 ** 2) / (model.gamma - 1.0)
    return ProblemSetup('example8', 'Pressure perturbation of a 2-D hydrostatic state', model, grid,
                        geometry, BoundaryCondition.free(4), initial, 0.12, 'p',
                        schemes=('1', '2'), steady=steady, reference=reference)


def advection_wave(nx: Optional[int] = None, velocity: float = 1.0) -> ProblemSetup:
    model = LinearAdvection(velocity)
    grid = GridSpec1D(0.0, 1.0, nx or 40)
    initial = np.sin(2.0 * np.pi * grid.centers())[None]
    return ProblemSetup('advection', 'Periodic sine wave', model, grid, Geometry.flat(grid),
                        BoundaryCondition.periodic(1), initial, 1.0, 'u')


def smooth_shallow_water(nx: Optional[int] = None, **constants) -> ProblemSetup:
    """Smooth subcritical flow over a periodic bump, no friction."""
    model = SaintVenant(manning=0.0, **constants)
    grid = GridSpec1D(0.0, 1.0, nx or 40)
    geometry = Geometry.from_function(grid, lambda x: 0.1 * np.sin(2.0 * np.pi * x) ** 2,
                                      lambda x: 0.2 * np.pi * np.sin(4.0 * np.pi * x))
    x = grid.centers()
    h = 1.0 + 0.1 * np.exp(np.cos(2.0 * np.pi * x)) - _interior(grid, geometry.values)
    q = 0.5 + 0.05 * np.sin(2.0 * np.pi * x)
    return ProblemSetup('shallow-water', 'Smooth periodic subcritical flow', model, grid, geometry,
                        BoundaryCondition.periodic(2), np.stack([h, q]), 0.1, 'h')


EXAMPLES: Dict[int, Callable[..., ProblemSetup]] = {
    1: divergent_nozzle,
    2: convergent_nozzle,
    3: friction_riemann,
    4: flow_over_hump,
    5: two_layer_steady,
    6: two_layer_riemann,
    7: gravity_shock_tube,
    8: hydrostatic_perturbation,
}

CONVERGENCE_PRESETS: Dict[str, Callable[..., ProblemSetup]] = {
    'advection': advection_wave,
    'shallow-water': smooth_shallow_water,
}


def build_example(number: int, nx: Optional[int] = None, **constants) -> ProblemSetup:
    """
    Raises:
        ConfigurationError: On an unknown example number or unsupported constants
    """
    if number not in EXAMPLES:
        raise ConfigurationError(f"Invalid example: {number}. Must be one of {sorted(EXAMPLES)}")
    try:
        return EXAMPLES[number](nx, **constants)
    except TypeError as e:
        raise ConfigurationError(f"Example {number} does not accept these constants: {str(e)}")


def build_convergence_preset(name: str, nx: int, **constants) -> ProblemSetup:
    if name not in CONVERGENCE_PRESETS:
        raise ConfigurationError(
            f"Invalid convergence preset: {name}. Must be one of {sorted(CONVERGENCE_PRESETS)}"
        )
    return CONVERGENCE_PRESETS[name](nx, **constants)
