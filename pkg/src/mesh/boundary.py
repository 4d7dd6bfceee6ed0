"""
Ghost-cell boundary handling.
Boundary rules are given per side and per component; fields are arrays of
shape (d, ..., n) with the swept direction last.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import ConfigurationError
from src.mesh.grid import GHOST_WIDTH, GridSpec1D, GridSpec2D


class BoundaryKind(str, Enum):
    FREE = 'free'
    REFLECTING = 'reflecting'
    FIXED_VALUE = 'fixed_value'
    PERIODIC = 'periodic'

    @classmethod
    def parse(cls, value: Union[str, 'BoundaryKind']) -> 'BoundaryKind':
        try:
            return cls(value)
        except ValueError:
            valid = [kind.value for kind in cls]
            raise ConfigurationError(f"Invalid boundary kind: {value}. Must be one of {valid}")


@dataclass(frozen=True)
class ComponentRule:
    """
    Ghost rule for one component on one side.

    Attributes:
        kind: Boundary kind
        value: Prescribed value for FIXED_VALUE
        odd: Mirror with a sign flip under REFLECTING (normal momentum)
    """

    kind: BoundaryKind = BoundaryKind.FREE
    value: Optional[float] = None
    odd: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'kind', BoundaryKind.parse(self.kind))
        if self.kind == BoundaryKind.FIXED_VALUE and self.value is None:
            raise ConfigurationError("FIXED_VALUE boundary requires a value")


SideRules = Tuple[ComponentRule, ...]


@dataclass(frozen=True)
class BoundaryCondition:
    """
    Boundary rules for every side of the domain.

    bottom/top are only used in 2-D; when omitted they reuse left/right.
    """

    left: SideRules
    right: SideRules
    bottom: Optional[SideRules] = None
    top: Optional[SideRules] = None

    @property
    def n_components(self) -> int:
        return len(self.left)

    @classmethod
    def free(cls, n_components: int) -> 'BoundaryCondition':
        rules = tuple(ComponentRule() for _ in range(n_components))
        return cls(rules, rules)

    @classmethod
    def periodic(cls, n_components: int) -> 'BoundaryCondition':
        rules = tuple(ComponentRule(BoundaryKind.PERIODIC) for _ in range(n_components))
        return cls(rules, rules)

    @classmethod
    def reflecting(cls, n_components: int, odd_components: Sequence[int],
                   odd_components_y: Optional[Sequence[int]] = None) -> 'BoundaryCondition':
        """
        Solid walls on every side.

        Args:
            n_components: Number of state components
            odd_components: Components flipped at x-walls (x-momentum)
            odd_components_y: Components flipped at y-walls (2-D only)
        """
        def side(odd):
            return tuple(ComponentRule(BoundaryKind.REFLECTING, odd=i in odd)
                         for i in range(n_components))

        x_rules = side(tuple(odd_components))
        if odd_components_y is None:
            return cls(x_rules, x_rules)
        y_rules = side(tuple(odd_components_y))
        return cls(x_rules, x_rules, y_rules, y_rules)

    def with_rule(self, side: str, component: int, rule: ComponentRule) -> 'BoundaryCondition':
        """Return a copy with one component rule replaced on one side."""
        if side not in ('left', 'right', 'bottom', 'top'):
            raise ConfigurationError(f"Invalid side: {side}")
        rules = getattr(self, side)
        if rules is None:
            rules = self.left if side == 'bottom' else self.right
        rules = list(rules)
        rules[component] = rule
        return replace(self, **{side: tuple(rules)})


def _check_rules(rules: SideRules, n_components: int, side: str):
    if len(rules) != n_components:
        raise ConfigurationError(
            f"Boundary '{side}' has {len(rules)} component rules, field has {n_components}"
        )
    for rule in rules:
        if not isinstance(rule.kind, BoundaryKind):
            raise ConfigurationError(f"Invalid boundary kind on '{side}': {rule.kind}")


def _fill_last_axis(field: np.ndarray, left: SideRules, right: SideRules, g: int,
                    reference: Optional[np.ndarray]) -> np.ndarray:
    """Extend the last axis of a (d, ..., n) array by g ghosts per side."""
    d, n = field.shape[0], field.shape[-1]
    _check_rules(left, d, 'left')
    _check_rules(right, d, 'right')
    out = np.empty(field.shape[:-1] + (n + 2 * g,), dtype=float)
    out[..., g:g + n] = field

    for i in range(d):
        for side, rule in (('left', left[i]), ('right', right[i])):
            if side == 'left':
                ghost, nearest = slice(0, g), field[i, ..., :1]
                mirror = field[i, ..., :g][..., ::-1] if n >= g else None
                wrap = field[i, ..., n - g:]
            else:
                ghost, nearest = slice(g + n, 2 * g + n), field[i, ..., -1:]
                mirror = field[i, ..., n - g:][..., ::-1] if n >= g else None
                wrap = field[i, ..., :g]

            if rule.kind == BoundaryKind.FREE:
                values = np.broadcast_to(nearest, out[i, ..., ghost].shape)
                if reference is not None:
                    b = g if side == 'left' else g + n - 1
                    values = reference[i, ..., ghost] + (nearest - reference[i, ..., b:b + 1])
                out[i, ..., ghost] = values
            elif rule.kind == BoundaryKind.FIXED_VALUE:
                out[i, ..., ghost] = rule.value
            elif rule.kind == BoundaryKind.REFLECTING:
                if mirror is None:
                    raise ConfigurationError(f"Reflecting boundary needs at least {g} cells")
                out[i, ..., ghost] = -mirror if rule.odd else mirror
            elif rule.kind == BoundaryKind.PERIODIC:
                if n < g:
                    raise ConfigurationError(f"Periodic boundary needs at least {g} cells")
                out[i, ..., ghost] = wrap
            else:
                raise ConfigurationError(f"Invalid boundary kind: {rule.kind}")
    return out


def fill_ghosts(field: np.ndarray, bc: BoundaryCondition,
                grid: Optional[GridSpec1D] = None,
                reference: Optional[np.ndarray] = None,
                ghost_width: Optional[int] = None) -> np.ndarray:
    """
    Extend a 1-D field by ghost cells on both sides.

    Args:
        field: Interior values, shape (n,) or (d, ..., n)
        bc: Boundary rules (left/right)
        grid: Grid supplying the ghost width
        reference: Extended steady state; Free ghosts then extrapolate the
            deviation from it instead of the value itself
        ghost_width: Explicit ghost width (defaults to the grid's)

    Returns:
        Extended array with the interior untouched

    Raises:
        ConfigurationError: On rule/field mismatch or unknown boundary kinds
    """
    g = ghost_width or (grid.ghost_width if grid is not None else GHOST_WIDTH)
    field = np.asarray(field, dtype=float)
    scalar = field.ndim == 1
    if scalar:
        field = field[None]
        reference = None if reference is None else np.asarray(reference, dtype=float)[None]
    out = _fill_last_axis(field, bc.left, bc.right, g, reference)
    return out[0] if scalar else out


def fill_ghosts_2d(field: np.ndarray, bc: BoundaryCondition, grid: GridSpec2D,
                   reference: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Extend a (d, ny, nx) field by ghost layers in both directions.

    x-ghosts are filled for the interior rows first, then y-ghosts for every
    column, which also fills the (unused) corner blocks.
    """
    g = grid.ghost_width
    ny = field.shape[1]
    bottom = bc.bottom if bc.bottom is not None else bc.left
    top = bc.top if bc.top is not None else bc.right

    rows_ref = None if reference is None else reference[:, g:g + ny, :]
    rows = _fill_last_axis(np.asarray(field, dtype=float), bc.left, bc.right, g, rows_ref)

    cols = np.swapaxes(rows, 1, 2)
    cols_ref = None if reference is None else np.swapaxes(reference, 1, 2)
    full = _fill_last_axis(cols, bottom, top, g, cols_ref)
    return np.ascontiguousarray(np.swapaxes(full, 1, 2))
