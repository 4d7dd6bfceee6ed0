"""
CSV output of fields, metrics and convergence tables.
"""

import logging
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from src.experiments.metrics import MetricsReport
from src.systems.base import ModelSystem


logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def write_table(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def field_frame_1d(model: ModelSystem, x: np.ndarray, U: np.ndarray,
                   E: Optional[np.ndarray] = None, steady: Optional[np.ndarray] = None) -> pd.DataFrame:
    """
    Columns x, <components>[, <equilibrium variables>][, d_<component>].

    Equilibrium names that repeat a component (q, m) get an `eq_` prefix.
    """
    frame = pd.DataFrame({'x': x})
    for name, values in zip(model.component_names, U):
        frame[name] = values
    if E is not None:
        for name, values in zip(model.equilibrium_names, E):
            frame[f"eq_{name}" if name in frame else name] = values
    if steady is not None:
        for name, values, reference in zip(model.component_names, U, steady):
            frame[f"d_{name}"] = values - reference
    return frame


def field_frame_2d(model: ModelSystem, X: np.ndarray, Y: np.ndarray, U: np.ndarray,
                   steady: Optional[np.ndarray] = None) -> pd.DataFrame:
    """Long format: one row per cell with columns x, y, <components>[, d_<component>]."""
    frame = pd.DataFrame({'x': X.ravel(), 'y': Y.ravel()})
    for name, values in zip(model.component_names, U):
        frame[name] = values.ravel()
    if steady is not None:
        for name, values, reference in zip(model.component_names, U, steady):
            frame[f"d_{name}"] = (values - reference).ravel()
    return frame


def metrics_frame(reports: Iterable[MetricsReport]) -> pd.DataFrame:
    return pd.DataFrame([report.row() for report in reports])


def write_metrics(reports: Iterable[MetricsReport], path: Path) -> Path:
    return write_table(metrics_frame(reports), path)
