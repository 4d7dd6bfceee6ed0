"""Physical models: flux, sources, equilibrium variables and their inversion."""

from typing import Dict, Type

from src.errors import ConfigurationError
from src.systems.base import ModelSystem
from src.systems.euler1d import EulerGravity1D, recover_state_euler
from src.systems.euler2d import EulerGravitySweep
from src.systems.linear_advection import LinearAdvection
from src.systems.nozzle import NozzleFlow, recover_state_nozzle
from src.systems.saint_venant import SaintVenant, recover_state_sw, recover_state_sw_hat
from src.systems.two_layer import TwoLayerShallowWater, recover_state_two_layer


MODELS: Dict[str, Type[ModelSystem]] = {
    cls.name: cls
    for cls in (NozzleFlow, SaintVenant, TwoLayerShallowWater, EulerGravity1D,
                EulerGravitySweep, LinearAdvection)
}


def build_model(name: str, **constants) -> ModelSystem:
    """
    Instantiate a model by its configuration name.

    Raises:
        ConfigurationError: If the name is unknown
    """
    if name not in MODELS:
        raise ConfigurationError(f"Unknown model: {name}. Must be one of {sorted(MODELS)}")
    return MODELS[name](**constants)


__all__ = [
    'MODELS', 'ModelSystem', 'build_model',
    'NozzleFlow', 'SaintVenant', 'TwoLayerShallowWater', 'EulerGravity1D',
    'EulerGravitySweep', 'LinearAdvection',
    'recover_state_nozzle', 'recover_state_sw', 'recover_state_sw_hat',
    'recover_state_two_layer', 'recover_state_euler',
]
