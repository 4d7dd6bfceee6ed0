"""
Accuracy and oscillation metrics on interior cells.
"""

from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, Field

from src.errors import ConfigurationError
from src.systems.base import ModelSystem


# second differences below this fraction of the largest one count as zero
NOISE_FLOOR = 1e-10


class MetricsReport(BaseModel):
    """Metrics of one run; differences are taken against the steady field if there is one."""

    problem: str
    scheme: str
    field: str
    cells: int
    t_final: float
    steps: int = Field(ge=0)
    runtime: float = Field(ge=0.0)
    linf: float
    l1: float
    total_variation: float
    oscillations: int = Field(ge=0)
    extras: Dict[str, float] = Field(default_factory=dict)

    def row(self) -> Dict[str, object]:
        """Flat record for tabular output."""
        record = self.model_dump(exclude={'extras'})
        record.update(self.extras)
        return record


def field_values(model: ModelSystem, U: np.ndarray, geo: np.ndarray, name: str) -> np.ndarray:
    """
    A conserved component or primitive field by name.

    Raises:
        ConfigurationError: If the model has no such field
    """
    if name in model.component_names:
        return U[model.component_names.index(name)]
    primitives = model.primitives(U, geo)
    if name not in primitives:
        valid = sorted(set(model.component_names) | set(primitives))
        raise ConfigurationError(f"Invalid metric field: {name}. Must be one of {valid}")
    return primitives[name]


def total_variation(values: np.ndarray) -> float:
    """Sum of absolute jumps along every axis."""
    values = np.asarray(values, dtype=float)
    return float(sum(np.abs(np.diff(values, axis=axis)).sum() for axis in range(values.ndim)))


def oscillation_count(values: np.ndarray, noise_floor: float = NOISE_FLOOR) -> int:
    """
    Sign changes of the discrete second difference, summed over all lines
    along every axis.

    Second differences smaller than noise_floor times the largest one are
    skipped, so round-off does not register as oscillations.
    """
    values = np.asarray(values, dtype=float)
    count = 0
    for axis in range(values.ndim):
        if values.shape[axis] < 4:
            continue
        second = np.moveaxis(np.diff(values, n=2, axis=axis), axis, -1)
        scale = np.max(np.abs(second)) if second.size else 0.0
        if scale == 0.0:
            continue
        lines = second.reshape(-1, second.shape[-1])
        for line in lines:
            signs = np.sign(line[np.abs(line) > noise_floor * scale])
            count += int(np.count_nonzero(signs[1:] != signs[:-1]))
    return count


def steady_flatness(discharge: np.ndarray, energy: np.ndarray,
                    target_discharge: Optional[float] = None) -> Dict[str, float]:
    """
    How far a settled state is from constant discharge and energy.

    The discharge deviation is measured from target_discharge (the imposed
    inflow) when given, else from its own mean. The energy spread is also
    reported relative to max |E|.
    """
    discharge = np.asarray(discharge, dtype=float)
    energy = np.asarray(energy, dtype=float)
    target = discharge.mean() if target_discharge is None else target_discharge
    spread = float(energy.max() - energy.min())
    return {
        'steady_q_deviation': float(np.max(np.abs(discharge - target))),
        'steady_energy_spread': spread,
        'steady_energy_relative_spread': spread / float(np.max(np.abs(energy))),
        'steady_energy_mean': float(energy.mean()),
    }


def norms(values: np.ndarray, cell_volume: float) -> Dict[str, float]:
    values = np.asarray(values, dtype=float)
    return {
        'linf': float(np.max(np.abs(values))),
        'l1': float(np.sum(np.abs(values)) * cell_volume),
    }


def compute_metrics(problem: str, scheme: str, field: str, values: np.ndarray,
                    steady: Optional[np.ndarray], cell_volume: float, t_final: float,
                    steps: int, runtime: float, extras: Optional[Dict[str, float]] = None
                    ) -> MetricsReport:
    """
    Args:
        values: Interior field values at the final time
        steady: Interior steady field, or None to measure the field itself
        cell_volume: dx in 1-D, dx*dy in 2-D
    """
    difference = values if steady is None else values - steady
    return MetricsReport(
        problem=problem,
        scheme=scheme,
        field=field,
        cells=int(np.size(values)),
        t_final=t_final,
        steps=steps,
        runtime=runtime,
        total_variation=total_variation(difference),
        oscillations=oscillation_count(difference),
        extras=extras or {},
        **norms(difference, cell_volume),
    )
