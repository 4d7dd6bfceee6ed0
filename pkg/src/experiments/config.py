"""
Run configuration.

Config files are flat `key = value` text; dotted keys select the section
(`scheme.variant = 1`, `grid.nx = 200`, `time.cfl = 0.45`). Values missing
from a file fall back to the example preset.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Tuple, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.errors import ConfigurationError
from src.mesh.boundary import BoundaryKind
from src.scheme.variants import RECONSTRUCTIONS, SchemeOptions, SchemeVariant
from src.timestepping.ssp_rk3 import DEFAULT_CFL, DEFAULT_MAX_STEPS, TimeControls


logger = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR = 'results'
SIDES = ('left', 'right', 'bottom', 'top')


class Section(BaseModel):
    model_config = ConfigDict(extra='forbid')


class SchemeSection(Section):
    variant: str = '1'
    reconstruction: str = 'weno'
    corrections: bool = True
    diffusion_threshold: Optional[float] = Field(default=None, ge=0.0)
    strict_recovery: bool = False

    @field_validator('variant')
    @classmethod
    def known_variant(cls, value: str) -> str:
        return SchemeVariant.parse(value).value

    @field_validator('reconstruction')
    @classmethod
    def known_reconstruction(cls, value: str) -> str:
        if value not in RECONSTRUCTIONS:
            raise ValueError(f"must be one of {list(RECONSTRUCTIONS)}")
        return value

    def options(self) -> SchemeOptions:
        return SchemeOptions(self.variant, self.reconstruction, self.corrections,
                             self.diffusion_threshold, self.strict_recovery)


class GridSection(Section):
    """Number of cells per direction; None keeps the preset mesh."""

    nx: Optional[int] = Field(default=None, ge=1)


class PhysicsSection(Section):
    """Physical constants; None keeps the preset value."""

    gamma: Optional[float] = Field(default=None, gt=1.0)
    kappa: Optional[float] = Field(default=None, gt=0.0)
    g: Optional[float] = Field(default=None, gt=0.0)
    r: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    manning: Optional[float] = Field(default=None, ge=0.0)

    def constants(self) -> Dict[str, float]:
        return {key: value for key, value in self.model_dump().items() if value is not None}


class TimeSection(Section):
    cfl: float = Field(default=DEFAULT_CFL, gt=0.0, le=1.0)
    t_final: Optional[float] = Field(default=None, ge=0.0)
    max_steps: int = Field(default=DEFAULT_MAX_STEPS, ge=1)
    log_every: int = Field(default=0, ge=0)

    def controls(self, t_final: float) -> TimeControls:
        return TimeControls(self.cfl, t_final, self.max_steps, log_every=self.log_every)


def parse_rule(spec: str) -> Tuple[BoundaryKind, Optional[float]]:
    """
    Parse a component rule written as `kind` or `fixed_value:<value>`.

    Raises:
        ConfigurationError: On an unknown kind or a missing or malformed value
    """
    name, _, value = str(spec).partition(':')
    kind = BoundaryKind.parse(name.strip())
    if kind != BoundaryKind.FIXED_VALUE:
        if value:
            raise ConfigurationError(f"Boundary kind {kind.value} takes no value, got '{spec}'")
        return kind, None
    try:
        return kind, float(value)
    except ValueError:
        raise ConfigurationError(f"Invalid fixed boundary value: '{spec}'. Expected fixed_value:<number>")


class BoundarySection(Section):
    """
    Boundary overrides; None and empty sides keep the preset.

    `kind` puts one kind on every side and component. Side entries map a
    component name to `kind` or `fixed_value:<value>`, e.g.
    `boundary.left.q = fixed_value:4.42`, and are applied after `kind`.
    """

    kind: Optional[BoundaryKind] = None
    left: Dict[str, str] = {}
    right: Dict[str, str] = {}
    bottom: Dict[str, str] = {}
    top: Dict[str, str] = {}

    @field_validator('left', 'right', 'bottom', 'top')
    @classmethod
    def known_rules(cls, rules: Dict[str, str]) -> Dict[str, str]:
        for spec in rules.values():
            try:
                parse_rule(spec)
            except ConfigurationError as e:
                raise ValueError(str(e))
        return rules

    def component_rules(self) -> Iterator[Tuple[str, str, BoundaryKind, Optional[float]]]:
        """(side, component, kind, value) for every per-component override."""
        for side in SIDES:
            for component, spec in getattr(self, side).items():
                yield (side, component, *parse_rule(spec))


class InitialSection(Section):
    """Tabulated initial data: a CSV with one column per state component."""

    file: Optional[str] = None


class OutputSection(Section):
    directory: str = DEFAULT_OUTPUT_DIR
    fields: bool = True
    differences: bool = True
    metric_field: Optional[str] = None
    cache: bool = True


class RunConfig(Section):
    example: int = Field(ge=1, le=8)
    model: Optional[str] = None
    scheme: SchemeSection = SchemeSection()
    grid: GridSection = GridSection()
    physics: PhysicsSection = PhysicsSection()
    time: TimeSection = TimeSection()
    boundary: BoundarySection = BoundarySection()
    initial: InitialSection = InitialSection()
    output: OutputSection = OutputSection()

    @property
    def output_dir(self) -> Path:
        return Path(self.output.directory)


def nest_keys(flat: Dict[str, Any]) -> Dict[str, Any]:
    """
    Turn dotted keys into nested dictionaries.

    Raises:
        ConfigurationError: If a key is both a value and a section
    """
    nested: Dict[str, Any] = {}
    for key, value in flat.items():
        parts = [part.strip() for part in key.split('.')]
        if not all(parts):
            raise ConfigurationError(f"Invalid config key: '{key}'")
        node = nested
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigurationError(f"Config key '{key}' conflicts with a value")
        if isinstance(node.get(parts[-1]), dict):
            raise ConfigurationError(f"Config key '{key}' conflicts with a section")
        node[parts[-1]] = value
    return nested


def merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dictionary merge; overrides win and None values are skipped."""
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def validate_config(raw: Dict[str, Any]) -> RunConfig:
    """
    Raises:
        ConfigurationError: On unknown keys or invalid values
    """
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as e:
        problems = '; '.join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(f"Invalid run configuration: {problems}")


def load_config(path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Load a `key = value` config file and merge nested overrides on top.

    Args:
        path: Config file path
        overrides: Nested dictionary, e.g. {'grid': {'nx': 400}}

    Raises:
        ConfigurationError: If the file is missing or invalid
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"Config file not found: {path}")
    values = {key: value for key, value in dotenv_values(path).items() if value is not None}
    logger.info(f"Loaded {len(values)} config entries from {path}")
    return validate_config(merge(nest_keys(values), overrides or {}))


def example_config(example: int, variant: Union[str, int] = '1',
                   overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Configuration of a preset example with optional nested overrides."""
    raw = {'example': example, 'scheme': {'variant': str(variant)}}
    return validate_config(merge(raw, overrides or {}))
