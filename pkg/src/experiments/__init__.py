"""Benchmark examples, steady states, metrics and convergence studies."""

from src.experiments.config import RunConfig, example_config, load_config
from src.experiments.metrics import MetricsReport
from src.experiments.presets import CONVERGENCE_PRESETS, EXAMPLES, ProblemSetup, build_example
from src.experiments.runner import compare, run, run_example, steady_state_builder

__all__ = [
    'RunConfig', 'example_config', 'load_config', 'MetricsReport',
    'CONVERGENCE_PRESETS', 'EXAMPLES', 'ProblemSetup', 'build_example',
    'compare', 'run', 'run_example', 'steady_state_builder',
]
