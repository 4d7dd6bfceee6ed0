"""
Example runs: build the problem, integrate, write CSV output, return metrics.
"""

import inspect
import logging
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.errors import ConfigurationError, SolverError
from src.experiments.config import RunConfig, example_config
from src.experiments.metrics import MetricsReport, compute_metrics, field_values, steady_flatness
from src.experiments.output import field_frame_1d, field_frame_2d, write_metrics, write_table
from src.experiments.presets import EXAMPLES, ProblemSetup, build_example
from src.experiments.steady import cache_path, load_steady_state, save_steady_state
from src.quadrature.ladders import running_integrals
from src.scheme.variants import SchemeOptions, SchemeVariant
from src.timestepping.ssp_rk3 import TimeControls, integrate


logger = logging.getLogger(__name__)

CACHE_DIR = 'cache'


def _accepts(func, name: str) -> bool:
    return name in inspect.signature(func).parameters


def load_initial(path: Union[str, Path], setup: ProblemSetup) -> np.ndarray:
    """
    Tabulated initial data with one column per state component.

    2-D tables are in the long format written by the output module.

    Raises:
        ConfigurationError: On missing files, columns or a size mismatch
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Initial data file not found: {path}")
    table = pd.read_csv(path)
    missing = [name for name in setup.model.component_names if name not in table.columns]
    if missing:
        raise ConfigurationError(f"Initial data {path} lacks columns {missing}")
    shape = setup.initial.shape[1:]
    if len(table) != int(np.prod(shape)):
        raise ConfigurationError(f"Initial data {path} has {len(table)} rows, grid needs {int(np.prod(shape))}")
    return np.stack([table[name].to_numpy(dtype=float).reshape(shape)
                     for name in setup.model.component_names])


def build_problem(config: RunConfig, options: Optional[SchemeOptions] = None) -> ProblemSetup:
    """
    Problem of a run configuration: preset, constants, boundary and initial data.

    Raises:
        ConfigurationError: On constants the preset does not take or a model mismatch
    """
    options = options or config.scheme.options()
    constants = config.physics.constants()
    if _accepts(EXAMPLES[config.example], 'mode'):
        constants['mode'] = options.interpolation_mode
    setup = build_example(config.example, config.grid.nx, **constants)
    if config.model is not None and config.model != setup.model.name:
        raise ConfigurationError(
            f"Example {config.example} uses model {setup.model.name}, config asks for {config.model}"
        )
    if config.boundary.kind is not None:
        setup = setup.with_boundary(config.boundary.kind)
    for side, component, kind, value in config.boundary.component_rules():
        setup = setup.with_component_rule(side, component, kind, value)
    if config.initial.file is not None:
        setup = replace(setup, initial=load_initial(config.initial.file, setup),
                        settle_time=None, perturb=None)
    return setup


def equilibrium_field(setup: ProblemSetup, discretization, U: np.ndarray, mode: str) -> np.ndarray:
    """Equilibrium variables on the interior cells of a 1-D problem, running integrals included."""
    U_ext = discretization.extend(U)
    geometry = setup.geometry
    integral = None
    if setup.model.has_integral:
        integrand = setup.model.equilibrium_integrand(U_ext, geometry.values, geometry.slopes)
        integral = running_integrals(integrand, setup.grid.dx, mode).center
    return setup.model.equilibrium(U_ext, geometry.values, integral)[..., setup.grid.interior]


def settle(setup: ProblemSetup, discretization, config: RunConfig, options: SchemeOptions
           ) -> Tuple[np.ndarray, Dict[str, float]]:
    """
    Run the scheme to settle_time and return the reached state with its flatness.

    The state is cached per scheme and mesh since each scheme has its own
    discrete equilibrium.
    """
    key = {
        'scheme': options.variant.value,
        'cells': setup.grid.n_cells,
        'recon': options.reconstruction,
        'corr': int(options.corrections),
        'settle': setup.settle_time,
        'cfl': config.time.cfl,
        **config.physics.constants(),
    }
    path = cache_path(config.output_dir / CACHE_DIR, setup.name, key)
    steady = load_steady_state(path, key) if config.output.cache else None
    if steady is None:
        logger.info(f"Settling {setup.name} with {options.variant.label} to t={setup.settle_time}")
        controls = TimeControls(config.time.cfl, setup.settle_time, config.time.max_steps,
                                log_every=config.time.log_every)
        steady = integrate(setup.initial, discretization, controls).U
        if config.output.cache:
            save_steady_state(path, steady, key)

    E = equilibrium_field(setup, discretization, steady, options.interpolation_mode)
    return steady, steady_flatness(steady[1], E[1], setup.settle_discharge)


def _write_fields(setup: ProblemSetup, discretization, U: np.ndarray, config: RunConfig,
                  options: SchemeOptions, directory: Path) -> None:
    steady = setup.steady if config.output.differences else None
    if setup.dimension == 2:
        X, Y = setup.grid.centers()
        frame = field_frame_2d(setup.model, X, Y, U, steady)
    else:
        E = equilibrium_field(setup, discretization, U, options.interpolation_mode)
        frame = field_frame_1d(setup.model, setup.grid.centers(), U, E, steady)
    write_table(frame, directory / 'fields.csv')


def run(config: RunConfig) -> MetricsReport:
    """
    Run one configured example and write its output.

    Returns:
        Metrics of the metric field at the final time

    Raises:
        SolverError: Any pipeline failure, after logging it with the example context
    """
    options = config.scheme.options()
    label = options.variant.label
    try:
        setup = build_problem(config, options)
        discretization = setup.discretization(options)
        t_final = config.time.t_final if config.time.t_final is not None else setup.t_final

        extras: Dict[str, float] = {}
        if setup.settle_time is not None:
            steady, extras = settle(setup, discretization, config, options)
            setup = replace(setup, steady=steady, initial=setup.perturb(steady))

        logger.info(f"Running {setup.name} ({setup.title}) with {label} on "
                    f"{setup.grid.shape if setup.dimension == 2 else setup.grid.n_cells} cells to t={t_final}")
        result = integrate(setup.initial, discretization, config.time.controls(t_final))

        field = config.output.metric_field or setup.metric_field
        geo = setup.interior_geometry
        values = field_values(setup.model, result.U, geo, field)
        steady_values = None if setup.steady is None else field_values(setup.model, setup.steady, geo, field)
        cell_volume = setup.dx ** setup.dimension
        report = compute_metrics(setup.name, label, field, values, steady_values, cell_volume,
                                 result.t, result.steps, result.runtime, extras)
    except SolverError as e:
        logger.error(f"Example {config.example} with {label} failed: {str(e)}")
        raise

    directory = config.output_dir / setup.name / label
    if config.output.fields:
        _write_fields(setup, discretization, result.U, config, options, directory)
    write_metrics([report], directory / 'metrics.csv')
    logger.info(f"{setup.name} {label}: linf={report.linf:.3e}, oscillations={report.oscillations}, "
                f"steps={report.steps}, runtime={report.runtime:.2f}s")
    return report


def run_example(number: int, variant: Union[str, SchemeVariant] = '1',
                overrides: Optional[Dict[str, Any]] = None) -> MetricsReport:
    """
    Run preset example `number` with one scheme variant.

    Args:
        number: Example number 1..8
        variant: Scheme variant ('1', '2', '3' or 'A')
        overrides: Nested config overrides, e.g. {'grid': {'nx': 100}}
    """
    if isinstance(variant, SchemeVariant):
        variant = variant.value
    return run(example_config(number, variant, overrides))


def compare(number: int, overrides: Optional[Dict[str, Any]] = None,
            variants: Optional[List[str]] = None) -> List[MetricsReport]:
    """Run the example with each of its schemes and write one metrics table."""
    config = example_config(number, '1', overrides)
    schemes = variants or list(build_problem(config).schemes)
    reports = [run(example_config(number, variant, overrides)) for variant in schemes]
    setup_name = f"example{number}"
    write_metrics(reports, config.output_dir / setup_name / 'compare.csv')
    return reports


def steady_state_builder(config: RunConfig) -> Path:
    """
    Build the example's discrete steady state, write it as CSV and cache it.

    For Example 4 the steady state is the settled output of the configured scheme.

    Raises:
        ConfigurationError: If the example has no steady state
    """
    options = config.scheme.options()
    setup = build_problem(config, options)
    discretization = setup.discretization(options)
    if setup.settle_time is not None:
        steady, flatness = settle(setup, discretization, config, options)
        logger.info(f"{setup.name} settled state: " +
                    ', '.join(f"{k}={v:.3e}" for k, v in flatness.items()))
        name = f"steady_{options.variant.label}.csv"
    elif setup.steady is not None:
        steady = setup.steady
        key = {'cells': setup.grid.n_cells, 'recon': options.reconstruction, **config.physics.constants()}
        save_steady_state(cache_path(config.output_dir / CACHE_DIR, setup.name, key), setup.reference, key)
        name = 'steady.csv'
    else:
        raise ConfigurationError(f"Example {config.example} has no steady state")

    if setup.dimension == 2:
        X, Y = setup.grid.centers()
        frame = field_frame_2d(setup.model, X, Y, steady)
    else:
        E = equilibrium_field(setup, discretization, steady, options.interpolation_mode)
        frame = field_frame_1d(setup.model, setup.grid.centers(), steady, E)
    return write_table(frame, config.output_dir / setup.name / name)
